"""Acceptance suite: one test per criterion, each at its stated size and tolerance.

A verdict line per criterion is printed in the terminal summary (see conftest.py).
"""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from ncbohr import radii
from ncbohr import words as W
from ncbohr.fock import CoeffSeries, FockRep, assemble
from ncbohr.harness import generators as G
from ncbohr.harness import instances as INST
from ncbohr.harness.cli import verify_instance
from ncbohr.inequalities import (
    CERTIFIED,
    bohr_gen_checks,
    bohr_majorant,
    bohr_polynomial_check,
    boh2_check,
    check_dominance,
    check_norm_leq_1,
    classical_bohr_check,
    fejer_bound_check,
    harmonic_compare,
    multi_toeplitz_section,
    oper_gen_checks,
    pk_positivity,
    posi_equivalence_check,
    tensor_bound_check,
)
from ncbohr.inequalities import tuples as TU
from ncbohr.inequalities.bohr import mobius_majorant, mobius_series, mobius_truncation_degree
from ncbohr.spectra import joint_radius_estimate, numerical_radius, row_norm
from ncbohr.symcalc import commutative_checks

T3 = (math.sqrt(6) - math.sqrt(2)) / 2


def parts(report, prefixes):
    return [m for m in report.margins if m.name.startswith(prefixes)]


@pytest.mark.criterion(1, "radii exactness")
def test_radii_exactness(record_property):
    start = time.perf_counter()
    t2, t3 = radii.solve_t(2), radii.solve_t(3)
    elapsed = time.perf_counter() - start
    record_property("t2_err", f"{abs(t2 - 1):.1e}")
    record_property("t3_err", f"{abs(t3 - T3):.1e}")
    record_property("seconds", f"{elapsed:.3f}")
    assert abs(t2 - 1.0) <= 1e-12
    assert abs(t3 - T3) <= 1e-10
    assert elapsed < 1.0


@pytest.mark.criterion(2, "radii asymptotics")
def test_radii_asymptotics(record_property):
    start = time.perf_counter()
    ts = [radii.solve_t(m) for m in range(2, 201)]
    gs = [radii.solve_gamma(m) for m in range(3, 301)]
    elapsed = time.perf_counter() - start
    record_property("t200-1/3", f"{ts[-1] - 1 / 3:.2e}")
    record_property("gamma300-1/2", f"{gs[-1] - 0.5:.2e}")
    record_property("seconds", f"{elapsed:.2f}")
    assert all(a > b for a, b in zip(ts, ts[1:])) and all(t > 1 / 3 for t in ts)
    assert ts[-1] - 1 / 3 < 1e-3
    assert all(a > b for a, b in zip(gs, gs[1:])) and all(g > 0.5 for g in gs)
    assert gs[-1] - 0.5 < 1e-3
    assert elapsed < 5.0


@pytest.mark.criterion(3, "creation-operator norm identity")
def test_graded_slice_norm_identity(record_property):
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(100):
        n, k = int(rng.integers(1, 4)), int(rng.integers(0, 5))
        coeffs = {w.letters: complex(*rng.standard_normal(2)) for w in W.enumerate_words(n, k)}
        norm = np.linalg.norm(assemble(CoeffSeries.from_scalars(n, "holomorphic", coeffs), FockRep(n, k)), 2)
        worst = max(worst, abs(norm - math.sqrt(sum(abs(c) ** 2 for c in coeffs.values()))))
    record_property("max_err", f"{worst:.1e}")
    assert worst <= 1e-10


@pytest.mark.criterion(4, "Fejer suite")
def test_fejer_suite(record_property):
    worst = math.inf
    for i in range(200):
        n, degree = 1 + i % 3, 1 + (i // 3) % 6  # band m = degree + 1 <= 7
        h, cert = G.generate_qq_positive(n, degree, seed=i)
        report = fejer_bound_check(h, certificate=cert)
        assert report.hypothesis.verdict == CERTIFIED
        worst = min(worst, report.worst_slack())
    equality = fejer_bound_check(CoeffSeries.from_scalars(1, "harmonic", {(): 2.0, (1,): 1.0}), m=2)
    record_property("worst_slack", f"{worst:.2e}")
    record_property("equality_slack", f"{equality.margins[0].slack:.1e}")
    assert worst >= -1e-8
    assert equality.passed and abs(equality.margins[0].slack) <= 1e-9


@pytest.mark.criterion(5, "Bohr polynomial suite")
def test_bohr_polynomial_suite(record_property):
    start = time.perf_counter()
    for i in range(100):
        n, degree = 1 + i % 3, 1 + (i // 3) % 4
        f, cert = G.generate_re_leq_I(n, degree, seed=i)
        poly = bohr_polynomial_check(f, certificate=cert, seed=i)
        assert poly.passed and poly.levels["t_m"] == radii.solve_t(degree + 1)
        assert boh2_check(f, certificate=cert, seed=i).passed
    elapsed = time.perf_counter() - start
    record_property("seconds", f"{elapsed:.2f}")
    assert elapsed < 60.0


@pytest.mark.criterion(6, "sharpness of 1/3")
def test_sharpness(record_property):
    a = 0.99
    values = {}
    for r in (1 / 3, 0.35):
        closed = mobius_majorant(a, r)
        series = bohr_majorant(mobius_series(a, mobius_truncation_degree(a, r)), r)
        assert abs(closed - series) <= 1e-12
        values[r] = closed
    record_property("at_1/3", f"{values[1 / 3]:.10f}")
    record_property("at_0.35", f"{values[0.35]:.10f}")
    assert values[1 / 3] <= 1 < values[0.35]


@pytest.mark.criterion(7, "operator-valued suite")
def test_operator_valued_suite(record_property):
    worst_tensor = 0.0
    for i in range(50):
        n, degree = 1 + i % 3, 1 + (i // 3) % 3
        f, cert = G.generate_re_leq_I(n, degree, seed=i, d=2)
        for k in range(1, degree + 1):
            assert pk_positivity(f, k, certificate=cert).is_psd
        rng = np.random.default_rng(i)
        ys = TU.word_products([y.conj().T for y in TU.random_row_tuple(n, 2, 1 / 3, rng)], degree)
        tensor = tensor_bound_check(f, ys, certificate=cert)
        worst_tensor = max(worst_tensor, tensor.margins[0].lhs)
        assert tensor.margins[0].lhs <= 1 + 1e-8
        gen = bohr_gen_checks(f, certificate=cert, seed=i)
        items = parts(gen, ("(ii)", "(iii)", "(iv)", "(v)", "(vi)"))
        assert items and all(m.passed for m in items)
        assert {m.name.split(")")[0] for m in items} >= {"(ii", "(iii", "(iv", "(vi"}
        _, verdict = multi_toeplitz_section(f, 1.0, 3, certificate=cert)
        assert verdict.is_psd
    record_property("max_tensor_norm", f"{worst_tensor:.4f}")


def positive_constant(f):
    """Right-multiply by the unitary polar factor of A_0, which keeps ||F(S)|| and makes A_0 >= 0."""
    u, _, vh = np.linalg.svd(f.constant())
    v = (u @ vh).conj().T
    return f.map(lambda w, a: a @ v)


@pytest.mark.criterion(8, "contractive suite")
def test_contractive_suite(record_property):
    for i in range(50):
        n, degree = 1 + i % 3, 1 + (i // 3) % 3
        f = G.generate_contractive(n, degree, seed=i, d=2)
        if i % 2 == 0:
            f = positive_constant(f)
        hyp = check_norm_leq_1(f, degree, (1.0,))
        report = oper_gen_checks(f, degree, hypothesis=hyp)
        assert parts(report, ("(i)",)) and parts(report, ("(ii)",)) and parts(report, ("(iii)",))
        if i % 2 == 0:
            assert parts(report, ("(iv)",))
        assert report.passed
    shift = oper_gen_checks(CoeffSeries.from_scalars(1, "holomorphic", {(1,): 1.0}))
    (first,) = parts(shift, ("(i)",))
    record_property("shift_equality_slack", f"{first.slack:.1e}")
    assert shift.passed and abs(first.slack) <= 1e-8


@pytest.mark.criterion(9, "numerical radius")
def test_numerical_radius(record_property):
    jordan = max(abs(numerical_radius(np.eye(m, k=1)).value - math.cos(math.pi / (m + 1))) for m in range(2, 13))
    record_property("jordan_err", f"{jordan:.1e}")
    assert jordan <= 1e-8
    rng = np.random.default_rng(9)
    unstabilized = 0
    for _ in range(50):
        n, d = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        xs = [TU.complex_gaussian(rng, (d, d)) for _ in range(n)]
        est = joint_radius_estimate(xs)
        unstabilized += not est.stabilized
        rn = row_norm(xs)
        assert 0.5 * rn - 1e-6 <= est.value <= rn + 1e-8
    record_property("unstabilized", unstabilized)


@pytest.mark.criterion(10, "block positivity equivalence")
def test_posi_equivalence(record_property):
    rng = np.random.default_rng(10)
    psd = 0
    for _ in range(100):
        p, xs = G.random_posi_instance(rng, int(rng.integers(1, 4)), int(rng.integers(1, 4)))
        report = posi_equivalence_check(p, xs, tol=1e-9)
        assert report.passed, report.notices
        psd += report.notices[0].startswith("M: PSD")
    record_property("psd_instances", psd)


@pytest.mark.criterion(11, "harmonic comparison")
def test_harmonic_comparison(record_property):
    for i in range(50):
        n, degree = 1 + i % 3, 1 + (i // 3) % 3
        lower, upper, cert = G.generate_dominated_pair(n, degree, seed=i, d=1 + i % 2)
        hyp = check_dominance(lower, upper, certificate=cert)
        free = harmonic_compare(lower, upper, hypothesis=hyp)
        assert free.passed and parts(free, ("Gram-norm transfer at r=0.333333",))
        banded = harmonic_compare(lower, upper, m=degree + 1, hypothesis=hyp)
        t_m = radii.solve_t(degree + 1)
        assert banded.passed and parts(banded, (f"joint radius transfer at r={t_m:.6g}",))
    lower, upper, cert = G.generate_dominated_pair(2, 2, seed=0, zero_gap=True)
    same = harmonic_compare(lower, upper, certificate=cert)
    (eq,) = parts(same, ("equal constants force equal coefficients",))
    record_property("equal_case_deviation", eq.lhs)
    assert same.passed and eq.lhs == 0.0


@pytest.mark.criterion(12, "commutative suite")
def test_commutative_suite(record_property):
    for n in (1, 2, 3):
        for k in range(7):
            for p in W.multi_indices(n, k):
                assert len(W.lambda_set(p)) == p.multinomial
    worst = math.inf
    for i in range(30):
        n, degree = 1 + i % 3, 1 + (i // 3) % 3
        s, cert = G.generate_sym(n, degree, seed=i)
        report = commutative_checks(s, certificate=cert, sphere_samples=200, seed=i)
        spheres = parts(report, ("scalar Bohr sum on the sphere",))
        assert len(spheres) == 2 and any("t_" in m.name for m in spheres)
        assert report.passed
        worst = min(worst, min(m.slack for m in spheres))
    record_property("worst_sphere_slack", f"{worst:.3e}")


@pytest.mark.criterion(13, "classical collapse")
def test_classical_collapse(record_property):
    rng = np.random.default_rng(13)
    worst = math.inf
    for _ in range(50):
        degree = int(rng.integers(1, 11))
        coeffs = {(1,) * k: complex(*rng.standard_normal(2)) for k in range(degree + 1)}
        report = classical_bohr_check(CoeffSeries.from_scalars(1, "holomorphic", coeffs), grid=4096, tol=1e-6)
        worst = min(worst, report.worst_slack())
        assert report.passed
    record_property("worst_slack", f"{worst:.3e}")


def _cli(*args, cwd):
    return subprocess.run([sys.executable, "-m", "ncbohr", *args], cwd=cwd, capture_output=True, text=True, check=False)


@pytest.mark.criterion(14, "determinism and round-trip")
def test_determinism_and_round_trip(tmp_path, record_property):
    for kind in INST.GENERATE_KINDS:
        d = 2 if kind in ("holo", "pair") else 1
        inst = INST.generate(kind, 2, 2, seed=14, d=d)
        text = INST.dumps(inst)
        assert INST.dumps(INST.generate(kind, 2, 2, seed=14, d=d)) == text
        back = INST.loads(text)
        assert INST.dumps(back) == text
        assert json.loads(INST.dumps(back)) == inst.to_json()
        first = [json.dumps(r.to_json(), sort_keys=True) for r in verify_instance(inst, seed=14)]
        again = [json.dumps(r.to_json(), sort_keys=True) for r in verify_instance(back, seed=14)]
        assert first == again
    outputs = []
    for run in range(2):
        out = tmp_path / f"run{run}"
        out.mkdir()
        gen = _cli("generate", "--kind", "holo", "--n", "2", "--degree", "2", "--seed", "7", "-o", "f.json", cwd=out)
        assert gen.returncode == 0, gen.stderr
        ver = _cli("verify", "--instance", "f.json", "--report", "r.json", cwd=out)
        assert ver.returncode == 0, ver.stdout + ver.stderr
        outputs.append(((out / "f.json").read_bytes(), (out / "r.json").read_bytes(), ver.stdout))
    record_property("cli_report_bytes", len(outputs[0][1]))
    assert outputs[0] == outputs[1]
