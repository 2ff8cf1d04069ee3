"""Command line interface: radii tables, instance generation, verification and demos.

Exit codes: 0 when everything passes, 1 when an inequality fails or a hypothesis is
violated, 2 on malformed input, failed certificate validation or bad flags.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence

import numpy as np

from .. import radii
from ..errors import HypothesisError, ValidationError
from ..fock import CoeffSeries
from ..inequalities import operator as OP
from ..inequalities.bohr import (
    bohr_majorant,
    bohr_polynomial_check,
    boh2_check,
    fejer_bound_check,
    harmonic_check,
    mobius_majorant,
    mobius_series,
    mobius_truncation_degree,
    trig_dominance_check,
)
from ..inequalities.harmonic import harmonic_compare
from ..inequalities.hypotheses import (
    check_dominance,
    check_norm_leq_1,
    check_positive,
    establish_re_leq_I,
)
from ..inequalities.report import VerificationReport
from ..spectra import numerical_radius
from ..symcalc import commutative_checks
from . import instances as INST
from .render import results_markdown

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
MAX_GRID_POINTS = 1000
CLAIMS = ("positive", "norm_leq_1", "re_leq_I")
RELATION_CLAIMS = {"qq": "positive", "contraction_qq": "norm_leq_1", "re_leq_I": "re_leq_I"}
GENERATOR_CLAIMS = {"qq": "positive", "contraction": "norm_leq_1", "contractive": "norm_leq_1"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so cli_main can return the code."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# -- argument helpers -----------------------------------------------------------


def parse_r_grid(text: str) -> tuple[float, ...]:
    """``a:b:step`` (inclusive of b) or a comma-separated list; values must lie in [0, 1]."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(x) for x in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            a, b, step = parts
            if step <= 0 or b < a:
                raise ValidationError(f"bad r-grid range {text!r}")
            count = int(math.floor((b - a) / step + 1e-9)) + 1
            values = [round(a + i * step, 12) for i in range(count)]
        else:
            values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationError(f"cannot parse r-grid {text!r}") from exc
    if not values or len(values) > MAX_GRID_POINTS:
        raise ValidationError(f"r-grid must have 1..{MAX_GRID_POINTS} points")
    if any(not 0 <= r <= 1 for r in values):
        raise ValidationError("r-grid values must lie in [0, 1]")
    return tuple(sorted(set(values)))


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


# -- verification dispatch --------------------------------------------------------


def instance_claim(inst: INST.InstanceFile) -> str:
    """Which hypothesis an instance asserts: from its certificate, then provenance, then its kind."""
    if inst.certificate is not None:
        return RELATION_CLAIMS[inst.certificate.relation]
    prov = inst.provenance
    if prov.get("hypothesis") in CLAIMS:
        return prov["hypothesis"]
    if prov.get("generator") in GENERATOR_CLAIMS:
        return GENERATOR_CLAIMS[prov["generator"]]
    return "positive" if inst.kind == "harmonic" else "re_leq_I"


def verify_instance(
    inst: INST.AnyInstance, level: int | None = None, r_grid: Sequence[float] | None = None, seed: int = 0
) -> list[VerificationReport]:
    """Run every check that applies to the instance.  Raises HypothesisError or ValidationError."""
    if isinstance(inst, INST.TrigPairFile):
        return [trig_dominance_check(inst.f, inst.g, certificate_h=inst.h)]
    if isinstance(inst, INST.PairFile):
        lower, upper = inst.lower.series(), inst.upper.series()
        hyp = check_dominance(lower, upper, level, r_grid, inst.certificate)
        m = max(lower.degree, upper.degree, 1) + 1
        return [
            harmonic_compare(lower, upper, None, hypothesis=hyp),
            harmonic_compare(lower, upper, m, hypothesis=hyp),
        ]
    series = inst.series()
    cert = inst.certificate
    if inst.kind == "sym":
        return [commutative_checks(series, certificate=cert, L=level, r_grid=r_grid, seed=seed)]
    claim = instance_claim(inst)
    if inst.kind == "harmonic":
        if claim == "positive":
            hyp = check_positive(series, level, r_grid, cert)
            if series.is_scalar:
                return [fejer_bound_check(series, hypothesis=hyp)]
            zero = CoeffSeries(series.n, "harmonic", series.coeff_dim, {})
            return [harmonic_compare(zero, series, None, hypothesis=hyp)]
        if claim == "norm_leq_1":
            hyp = check_norm_leq_1(series, level, r_grid, cert)
            m = max(series.degree, 1) + 1
            return [
                harmonic_check(series, None, hypothesis=hyp, seed=seed),
                harmonic_check(series, m, hypothesis=hyp, seed=seed),
            ]
        raise ValidationError(f"a harmonic instance cannot claim {claim}")
    if claim == "norm_leq_1":
        L = max(series.degree, 1) if level is None else level
        hyp = check_norm_leq_1(series, L, r_grid if r_grid is not None else (1.0,), cert)
        return [OP.oper_gen_checks(series, L, hypothesis=hyp)]
    if claim != "re_leq_I":
        raise ValidationError(f"a holomorphic instance cannot claim {claim}")
    hyp = establish_re_leq_I(series, None, cert, level, r_grid)
    if series.is_scalar:
        return [
            bohr_polynomial_check(series, hypothesis=hyp, seed=seed),
            boh2_check(series, hypothesis=hyp, seed=seed),
        ]
    return OP.operator_suite(series, hypothesis=hyp, seed=seed)


def verify_path(path: str, level: int | None, r_grid: Sequence[float] | None, seed: int) -> dict:
    """Load and verify one file; errors become part of the returned entry."""
    entry = {"instance": path, "verdict": "pass", "reports": [], "error": None}
    try:
        reports = verify_instance(INST.load(path), level, r_grid, seed)
    except HypothesisError as exc:
        entry.update(verdict="fail", error=f"hypothesis violated: {exc}")
        return entry
    except ValidationError as exc:
        entry.update(verdict="error", error=f"{type(exc).__name__}: {exc}")
        return entry
    entry["reports"] = reports
    entry["verdict"] = "pass" if all(r.passed for r in reports) else "fail"
    return entry


def entry_to_json(entry: dict) -> dict:
    return {**entry, "reports": [r.to_json() for r in entry["reports"]]}


# -- subcommands -------------------------------------------------------------------


def cmd_radii(args) -> int:
    table = radii.RadiusTable.build(args.kind, args.m_max, args.tol, args.m_min)
    _emit(table.to_csv() if args.format == "csv" else table.to_json() + "\n", args.output)
    return EXIT_PASS


def cmd_generate(args) -> int:
    inst = INST.generate(args.kind, args.n, args.degree, args.seed, args.dim, args.margin)
    _emit(INST.dumps(inst), args.output)
    return EXIT_PASS


def cmd_verify(args) -> int:
    r_grid = None if args.r_grid is None else parse_r_grid(args.r_grid)
    if args.level is not None and args.level < 0:
        raise ValidationError("level must be >= 0")
    if args.jobs < 1:
        raise ValidationError("jobs must be >= 1")
    paths = list(args.instance)
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        entries = list(pool.map(lambda p: verify_path(p, args.level, r_grid, args.seed), paths))
    entries.sort(key=lambda e: e["instance"])
    for e in entries:
        line = f"{e['verdict'].upper():5s} {e['instance']}"
        if e["error"]:
            line += f"  ({e['error']})"
        else:
            worst = min((r.worst_slack() for r in e["reports"]), default=math.inf)
            line += f"  ({len(e['reports'])} reports, worst slack {worst:.3e})"
        print(line)
    if args.report:
        if args.report.endswith(".md"):
            text = results_markdown(entries)
        else:
            text = json.dumps({"results": [entry_to_json(e) for e in entries]}, indent=2, sort_keys=True) + "\n"
        Path(args.report).write_text(text, encoding="utf-8")
    verdicts = {e["verdict"] for e in entries}
    if "error" in verdicts:
        return EXIT_INPUT
    return EXIT_FAIL if "fail" in verdicts else EXIT_PASS


def cmd_demo_sharpness(args) -> int:
    a, r = args.a, args.r
    closed = mobius_majorant(a, r)
    degree = mobius_truncation_degree(a, r)
    summed = bohr_majorant(mobius_series(a, degree), r)
    print(f"f(z) = (a - z)/(1 - a z), a = {a:.12g}")
    print(f"majorant at r = {r:.12g}: closed form {closed:.15g}, series (degree {degree}) {summed:.15g}")
    print(f"majorant at r = 1/3: {mobius_majorant(a, 1 / 3):.15g}")
    print("exceeds 1" if closed > 1 else "does not exceed 1")
    return EXIT_PASS


def cmd_demo_jordan(args) -> int:
    if args.m < 2:
        raise ValidationError("m must be >= 2")
    print("m,numerical_radius,cos(pi/(m+1)),difference")
    for m in range(2, args.m + 1):
        w = numerical_radius(np.eye(m, k=1)).value
        c = math.cos(math.pi / (m + 1))
        print(f"{m},{w!r},{c!r},{w - c:.3e}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ncbohr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("radii", help="table of t_m or gamma_m")
    p.add_argument("--kind", choices=("t", "gamma"), required=True)
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--m-min", type=int, default=2)
    p.add_argument("--tol", type=float, default=radii.DEFAULT_TOL)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_radii)

    p = sub.add_parser("generate", help="write a certified random instance")
    p.add_argument("--kind", choices=INST.GENERATE_KINDS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--margin", type=float, default=0.1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="verify instance files")
    p.add_argument("--instance", action="append", required=True, help="instance file (repeatable)")
    p.add_argument("--level", type=int, help="Fock truncation level for section-checked hypotheses")
    p.add_argument("--r-grid", help="radii for section-checked hypotheses: a:b:step or a,b,c")
    p.add_argument("--report", help="write results as .json or .md")
    p.add_argument("--seed", type=int, default=0, help="seed for random spot checks")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", help="printed demonstrations (always exit 0)")
    demo = p.add_subparsers(dest="demo", required=True, parser_class=_Parser)
    q = demo.add_parser("sharpness", help="Mobius majorant against 1")
    q.add_argument("--a", type=float, required=True)
    q.add_argument("--r", type=float, required=True)
    q.set_defaults(func=cmd_demo_sharpness)
    q = demo.add_parser("jordan", help="numerical radius of nilpotent Jordan blocks")
    q.add_argument("--m", type=int, required=True)
    q.set_defaults(func=cmd_demo_jordan)
    return parser


def cli_main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except HypothesisError as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(cli_main())
