"""Coefficient comparison for two dominated harmonic series H_A <= H_B."""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .. import radii
from .. import words as W
from ..errors import ValidationError
from ..fock import CoeffSeries, graded_row_norm
from ..serialize import series_to_json
from ..spectra import graded_numerical_radius, joint_operator, max_joint_level, numerical_radius, op_norm
from .hypotheses import Certificate, check_dominance, require
from .report import SLACK_TOL, HypothesisCheck, VerificationReport, make_report, operator_margin, scalar_margin

EQUALITY_TOL = 1e-12


def joint_radius_at(xs: list[np.ndarray], L: int) -> float:
    """w_L of the tuple; the exact w for scalar tuples and for a single matrix."""
    if xs[0].shape == (1, 1):
        return math.sqrt(math.fsum(abs(complex(x[0, 0])) ** 2 for x in xs))
    if len(xs) == 1:
        return numerical_radius(xs[0]).value
    return graded_numerical_radius(joint_operator(xs, L))


def _slice_adjoints(series: CoeffSeries, k: int) -> list[np.ndarray]:
    return [series.coeff(w).conj().T for w in W.enumerate_words(series.n, k)]


def harmonic_compare(
    lower: CoeffSeries,
    upper: CoeffSeries,
    m: int | None = None,
    certificate: Certificate | None = None,
    hypothesis: HypothesisCheck | None = None,
    L: int | None = None,
    r_grid: Iterable[float] | None = None,
    hyp_r_grid: Iterable[float] | None = None,
    max_level: int | None = None,
    tol: float = SLACK_TOL,
) -> VerificationReport:
    """Wiener and Bohr comparisons for H_A <= H_B (A = ``lower``, B = ``upper``).

    Always checks sum (B-A)^*(B-A) <= ||B_0 - A_0|| (B_0 - A_0) per degree and the r-sum
    transfer of Gram norms for r <= 1/3.  With a band m it also checks the joint radius
    bounds w(B^* - A^*) <= ||B_0 - A_0|| cos(...) and their transfer on [0, t_m], all radii
    evaluated at one common truncation level per degree.
    """
    if (lower.n, lower.coeff_dim) != (upper.n, upper.coeff_dim):
        raise ValidationError("compared series must share n and coeff_dim")
    if hypothesis is None:
        hypothesis = check_dominance(lower, upper, L, hyp_r_grid, certificate)
    require(hypothesis)
    diff = upper.combine(lower, 1.0, -1.0)
    deg = max(lower.degree, upper.degree)
    if m is not None:
        m = int(m)
        if m < 2 or deg > m - 1:
            raise ValidationError(f"band m={m} does not cover degree {deg}")
    d = lower.coeff_dim
    c0 = diff.constant()
    c = op_norm(c0)
    report = make_report(
        "harmonic_compare",
        {"lower": series_to_json(lower), "upper": series_to_json(upper)},
        m=m,
        r=None if r_grid is None else list(r_grid),
        max_level=max_level,
    )
    report.hypothesis = hypothesis
    report.tolerances["slack"] = tol
    report.levels["c0_norm"] = c

    if c <= EQUALITY_TOL:
        dev = max((float(np.max(np.abs(a))) for a in diff.terms.values()), default=0.0)
        report.notice("B_0 = A_0: dominance forces A = B")
        report.add(scalar_margin("equal constants force equal coefficients", dev, 0.0, EQUALITY_TOL))

    for k in range(1, deg + 1):
        report.add(operator_margin(f"Gram of B - A <= ||C_0|| C_0, k={k}", diff.gram(k), c * c0, tol))

    a_norms = [graded_row_norm(lower, k) for k in range(deg + 1)]
    b_norms = [graded_row_norm(upper, k) for k in range(deg + 1)]
    rs = sorted({float(r) for r in (r_grid if r_grid is not None else (0.0, 0.1, 0.2, 0.3))})
    for r in [r for r in rs if 0 <= r <= 1 / 3] + [1 / 3]:
        lhs = math.fsum(r**k * a_norms[k] for k in range(1, deg + 1))
        rhs = c / 2 + math.fsum(r**k * b_norms[k] for k in range(1, deg + 1))
        report.add(scalar_margin(f"Gram-norm transfer at r={r:.6g}", lhs, rhs, tol))

    if m is None:
        return report

    t_m = radii.solve_t(m)
    report.levels.update(m=m, t_m=t_m)
    wa, wb = [0.0], [0.0]
    for k in range(1, m):
        n_k = lower.n**k
        level = max_joint_level(n_k, d) if max_level is None else min(max_level, max_joint_level(n_k, d))
        report.levels[f"joint_level_k{k}"] = level
        w_c = joint_radius_at(_slice_adjoints(diff, k), level)
        wa.append(joint_radius_at(_slice_adjoints(lower, k), level))
        wb.append(joint_radius_at(_slice_adjoints(upper, k), level))
        report.add(scalar_margin(f"joint radius of B - A, k={k}", w_c, c * radii.cos_factor(m, k), tol))
    band_rs = sorted({r for r in rs if 0 <= r <= t_m} | {t_m})
    for r in band_rs:
        lhs = math.fsum(r**k * wa[k] for k in range(1, m))
        rhs = c / 2 + math.fsum(r**k * wb[k] for k in range(1, m))
        report.add(scalar_margin(f"joint radius transfer at r={r:.6g}", lhs, rhs, tol))
    return report
