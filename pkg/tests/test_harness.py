import json

import numpy as np
import pytest

from ncbohr.errors import ValidationError
from ncbohr.fock import CoeffSeries
from ncbohr.harness import instances as INST
from ncbohr.harness.cli import EXIT_FAIL, EXIT_INPUT, EXIT_PASS, cli_main, parse_r_grid, verify_instance
from ncbohr.harness.render import report_markdown


@pytest.mark.parametrize("kind", INST.GENERATE_KINDS)
def test_generated_instances_round_trip_and_verify(kind):
    d = 1 if kind in ("contraction", "trig") else 2 if kind == "holo" else 1
    inst = INST.generate(kind, 2, 2, seed=3, d=d)
    text = INST.dumps(inst)
    back = INST.loads(text)
    assert INST.dumps(back) == text
    reports = verify_instance(back)
    assert reports and all(r.passed for r in reports)


@pytest.mark.parametrize("kind", ["qq", "holo", "sym"])
def test_generation_is_deterministic(kind):
    assert INST.dumps(INST.generate(kind, 2, 2, 11)) == INST.dumps(INST.generate(kind, 2, 2, 11))
    assert INST.dumps(INST.generate(kind, 2, 2, 11)) != INST.dumps(INST.generate(kind, 2, 2, 12))


def test_reports_are_deterministic():
    inst = INST.generate("holo", 2, 2, 5)
    a = [json.dumps(r.to_json(), sort_keys=True) for r in verify_instance(inst, seed=1)]
    b = [json.dumps(r.to_json(), sort_keys=True) for r in verify_instance(INST.loads(INST.dumps(inst)), seed=1)]
    assert a == b


def test_complex_values_survive_round_trip_exactly():
    inst = INST.generate("holo", 1, 3, 2)
    back = INST.loads(INST.dumps(inst))
    for w, a in inst.series().terms.items():
        assert np.array_equal(back.series().coeff(w), a)


def test_bad_inputs():
    with pytest.raises(ValidationError):
        INST.loads("{not json")
    with pytest.raises(ValidationError):
        INST.loads(json.dumps({"schema_version": 99}))
    with pytest.raises(ValidationError):
        INST.generate("contraction", 1, 1, 0, d=2)
    with pytest.raises(ValidationError):
        INST.generate("nope", 1, 1, 0)


def test_r_grid_parsing():
    assert parse_r_grid("0:0.5:0.25") == (0.0, 0.25, 0.5)
    assert parse_r_grid("0.1,0.9") == (0.1, 0.9)
    for bad in ("0:2:0.5", "a,b", "0:1:0"):
        with pytest.raises(ValidationError):
            parse_r_grid(bad)


def test_markdown_report():
    inst = INST.generate("holo", 1, 2, 0)
    text = report_markdown(verify_instance(inst)[0])
    assert "| check | lhs | rhs | slack | tol | result |" in text


# -- command line ------------------------------------------------------------------


def test_cli_radii_table(capsys):
    assert cli_main(["radii", "--kind", "t", "--m-max", "3"]) == EXIT_PASS
    out = capsys.readouterr().out.splitlines()
    assert out[1].startswith("2,1.0,") and out[2].startswith("3,0.5176380902")


def test_cli_sharpness_demo(capsys):
    assert cli_main(["demo", "sharpness", "--a", "0.99", "--r", "0.35"]) == EXIT_PASS
    assert "exceeds 1" in capsys.readouterr().out


def test_cli_jordan_demo(capsys):
    assert cli_main(["demo", "jordan", "--m", "4"]) == EXIT_PASS
    assert len(capsys.readouterr().out.splitlines()) == 4


def test_cli_generate_and_verify(tmp_path, capsys):
    path = tmp_path / "holo.json"
    assert cli_main(["generate", "--kind", "holo", "--n", "2", "--degree", "2", "--seed", "4", "-o", str(path)]) == 0
    report = tmp_path / "out.md"
    assert cli_main(["verify", "--instance", str(path), "--report", str(report)]) == EXIT_PASS
    assert "PASS" in capsys.readouterr().out
    assert report.read_text().startswith("#")


def test_cli_tampered_certificate_is_an_input_error(tmp_path):
    path = tmp_path / "holo.json"
    INST.save(INST.generate("holo", 1, 2, 0), path)
    obj = json.loads(path.read_text())
    obj["terms"][1]["coeff"][0][0]["re"] += 1e-6
    path.write_text(json.dumps(obj))
    assert cli_main(["verify", "--instance", str(path)]) == EXIT_INPUT


def test_cli_violated_instance_fails(tmp_path):
    inst = INST.InstanceFile.from_series(
        CoeffSeries.from_scalars(1, "holomorphic", {(1,): 2.0}), None, {"hypothesis": "re_leq_I"}
    )
    path = tmp_path / "bad.json"
    INST.save(inst, path)
    assert cli_main(["verify", "--instance", str(path), "--level", "20", "--r-grid", "0.9"]) == EXIT_FAIL


def test_cli_usage_errors(capsys):
    assert cli_main(["radii", "--kind", "x", "--m-max", "3"]) == EXIT_INPUT
    assert cli_main(["verify"]) == EXIT_INPUT
    assert cli_main(["radii", "--kind", "t", "--m-max", "1"]) == EXIT_INPUT
    assert "usage" in capsys.readouterr().err


def test_qq_cross_check_detects_a_wrong_expansion(monkeypatch):
    from ncbohr.errors import CertificateError
    from ncbohr.harness import generators as G

    rng = np.random.default_rng(0)
    q = G.random_q_terms(2, 2, 1, rng)
    assert G.validate_qq_expansion(q, 2, 1, 2) == 4
    real = G.qstar_q

    def skewed(q_terms, n, d):
        out = real(q_terms, n, d)
        key = next(w for w in out if len(w) == 1)
        out[key] = out[key] + 1e-9
        return out

    monkeypatch.setattr(G, "qstar_q", skewed)
    with pytest.raises(CertificateError):
        G.validate_qq_expansion(q, 2, 1, 2)
