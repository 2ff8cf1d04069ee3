"""Establishing the positivity hypotheses that every inequality assumes.

A hypothesis is either certified by an explicit Q^*Q identity, checked on a finite
Fock section (necessary-condition evidence only), or found violated.  Finite sections
are compressions of the full operators, so a violation on a section is definitive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .. import words as W
from ..errors import CertificateError, HypothesisError, ValidationError
from ..fock import CoeffSeries, FockRep, assemble, graded_row_norm, max_dense_dim, qstar_q
from ..spectra import PSD_TOL, op_norm, psd_check
from ..words import Word
from .report import CERTIFIED, SECTION_POSITIVE, VIOLATED, HypothesisCheck

DEFAULT_R_GRID = (0.5, 0.9, 0.99, 1.0)
CERT_TOL = 1e-12
RELATIONS = ("qq", "re_leq_I", "contraction_qq", "dominance")


@dataclass(frozen=True)
class Certificate:
    """Explicit witness Q = sum q_alpha S_alpha for a positivity identity.

    relation:
      ``qq``             H = Q^*Q
      ``re_leq_I``       2I - F - F^* = Q^*Q
      ``contraction_qq`` H = I - Q^*Q / scale with scale >= ||Q(S)||^2 (triangle bound)
      ``dominance``      H_B - H_A = Q^*Q
    """

    relation: str
    q_terms: Mapping[Word, np.ndarray]
    scale: float = 1.0
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.relation not in RELATIONS:
            raise ValidationError(f"unknown certificate relation {self.relation!r}")
        if not self.scale > 0:
            raise ValidationError("certificate scale must be positive")

    def band(self, n: int, d: int) -> dict[Word, np.ndarray]:
        return qstar_q(self.q_terms, n, d)


def q_norm_bound(q_terms: Mapping[Word, np.ndarray], n: int, d: int) -> float:
    """sum_k ||sum_{|alpha|=k} q_alpha^* q_alpha||^{1/2}, an upper bound for ||Q(S)||."""
    q = CoeffSeries(n, "holomorphic", d, q_terms)
    return math.fsum(graded_row_norm(q, k) for k in range(q.degree + 1))


def expected_terms(cert: Certificate, n: int, d: int) -> dict[Word, np.ndarray]:
    """Coefficients the certified series must have (for ``dominance``: of H_B - H_A)."""
    band = cert.band(n, d)
    eye = np.eye(d, dtype=complex)
    g0 = W.identity(n)
    if cert.relation in ("qq", "dominance"):
        return band
    if cert.relation == "re_leq_I":
        out = {w: -a for w, a in band.items() if len(w) > 0}
        out[g0] = eye - 0.5 * band.get(g0, 0 * eye)
        return out
    # contraction_qq
    out = {w: -a / cert.scale for w, a in band.items() if len(w) > 0}
    out[g0] = eye - band.get(g0, 0 * eye) / cert.scale
    return out


def _compare_terms(actual: Mapping[Word, np.ndarray], expected: Mapping[Word, np.ndarray], d: int) -> float:
    keys = set(actual) | set(expected)
    zero = np.zeros((d, d), dtype=complex)
    return max((float(np.max(np.abs(actual.get(w, zero) - expected.get(w, zero)))) for w in keys), default=0.0)


def validate_certificate(series: CoeffSeries, cert: Certificate, lower: CoeffSeries | None = None) -> float:
    """Check that ``cert`` reproduces ``series`` (or ``series - lower`` for dominance).

    Returns the largest coefficient discrepancy; raises CertificateError above tolerance.
    """
    n, d = series.n, series.coeff_dim
    expected = expected_terms(cert, n, d)
    if cert.relation == "dominance":
        if lower is None:
            raise ValidationError("a dominance certificate needs the lower series")
        actual = series.combine(lower, 1.0, -1.0).terms
    else:
        actual = series.terms
    if cert.relation == "re_leq_I" and series.kind == "harmonic":
        raise ValidationError("re_leq_I certificates apply to holomorphic series")
    if cert.relation in ("qq", "contraction_qq") and series.kind != "harmonic":
        raise ValidationError(f"{cert.relation} certificates apply to harmonic series")
    if cert.relation == "contraction_qq":
        bound = q_norm_bound(cert.q_terms, n, d)
        if cert.scale < bound**2 * (1 - CERT_TOL):
            raise CertificateError(f"scale {cert.scale} is below the norm bound {bound**2} for Q^*Q")
    scale = max(1.0, max((float(np.max(np.abs(a))) for a in expected.values()), default=1.0))
    err = _compare_terms(actual, expected, d)
    if err > CERT_TOL * scale:
        raise CertificateError(f"certificate does not reproduce the coefficients (max deviation {err:.3e})")
    return err


# -- section checks -----------------------------------------------------------


def default_level(n: int, d: int, degree: int, factor: int = 2) -> int:
    """Largest level <= factor * degree (at least 1) whose dense size fits the cap."""
    cap = max_dense_dim()
    L = max(factor * degree, 1)
    while L > 1 and W.basis_size(n, L) * d > cap:
        L -= 1
    return L


def _grid(r_grid: Iterable[float] | None) -> tuple[float, ...]:
    rs = tuple(float(r) for r in (DEFAULT_R_GRID if r_grid is None else r_grid))
    if not rs:
        raise ValidationError("empty r-grid")
    for r in rs:
        if not 0.0 <= r <= 1.0:
            raise ValidationError(f"radius {r} outside [0, 1]")
    return rs


def _section_check(
    kind: str, build: Callable[[float], np.ndarray], rs: Sequence[float], L: int, tol: float
) -> HypothesisCheck:
    worst = math.inf
    for r in rs:
        v = psd_check(build(r), tol)
        if not v.is_psd:
            return HypothesisCheck(kind, VIOLATED, L, r, v.min_eigenvalue, "negative direction on the section")
        worst = min(worst, v.min_eigenvalue)
    return HypothesisCheck(kind, SECTION_POSITIVE, L, max(rs), worst)


def check_re_leq_I(
    series: CoeffSeries,
    L: int | None = None,
    r_grid: Iterable[float] | None = None,
    certificate: Certificate | None = None,
    tol: float = PSD_TOL,
) -> HypothesisCheck:
    """Re F(rS) <= I, i.e. 2I - F(rS) - F(rS)^* >= 0, for r on the grid."""
    if series.kind == "harmonic":
        raise ValidationError("check_re_leq_I needs a holomorphic series")
    if certificate is not None:
        validate_certificate(series, certificate)
        return HypothesisCheck("re_leq_I", CERTIFIED, detail="2I - F - F^* = Q^*Q")
    L = default_level(series.n, series.coeff_dim, series.degree) if L is None else L
    rep = FockRep(series.n, L)
    eye = np.eye(rep.dim * series.coeff_dim)

    def build(r: float) -> np.ndarray:
        x = assemble(series, rep, r)
        return 2 * eye - x - x.conj().T

    return _section_check("re_leq_I", build, _grid(r_grid), L, tol)


def check_positive(
    series: CoeffSeries,
    L: int | None = None,
    r_grid: Iterable[float] | None = None,
    certificate: Certificate | None = None,
    tol: float = PSD_TOL,
) -> HypothesisCheck:
    """H(rS) >= 0 for a harmonic series."""
    if series.kind != "harmonic":
        raise ValidationError("check_positive needs a harmonic series")
    if certificate is not None:
        validate_certificate(series, certificate)
        return HypothesisCheck("positive", CERTIFIED, detail="H = Q^*Q")
    L = default_level(series.n, series.coeff_dim, series.degree) if L is None else L
    rep = FockRep(series.n, L)
    return _section_check("positive", lambda r: assemble(series, rep, r), _grid(r_grid), L, tol)


def check_norm_leq_1(
    series: CoeffSeries,
    L: int | None = None,
    r_grid: Iterable[float] | None = None,
    certificate: Certificate | None = None,
    tol: float = PSD_TOL,
) -> HypothesisCheck:
    """||F(rS)|| <= 1 (holomorphic) or ||H(rS)|| <= 1 (harmonic) on the section."""
    if certificate is not None:
        validate_certificate(series, certificate)
        return HypothesisCheck("norm_leq_1", CERTIFIED, detail="H = I - Q^*Q/c, c >= ||Q||^2")
    L = default_level(series.n, series.coeff_dim, max(series.degree, 1), factor=1) if L is None else L
    rep = FockRep(series.n, L)
    worst = math.inf
    rs = _grid(r_grid)
    for r in rs:
        norm = op_norm(assemble(series, rep, r))
        gap = 1.0 - norm
        if gap < -tol:
            return HypothesisCheck("norm_leq_1", VIOLATED, L, r, gap, f"section norm {norm:.12g} > 1")
        worst = min(worst, gap)
    return HypothesisCheck("norm_leq_1", SECTION_POSITIVE, L, max(rs), worst)


def check_dominance(
    lower: CoeffSeries,
    upper: CoeffSeries,
    L: int | None = None,
    r_grid: Iterable[float] | None = None,
    certificate: Certificate | None = None,
    tol: float = PSD_TOL,
) -> HypothesisCheck:
    """H_lower(rS) <= H_upper(rS)."""
    if lower.kind != "harmonic" or upper.kind != "harmonic":
        raise ValidationError("dominance compares harmonic series")
    if certificate is not None:
        validate_certificate(upper, certificate, lower=lower)
        return HypothesisCheck("pointwise_dominance", CERTIFIED, detail="H_B - H_A = Q^*Q")
    diff = upper.combine(lower, 1.0, -1.0)
    L = default_level(diff.n, diff.coeff_dim, max(lower.degree, upper.degree)) if L is None else L
    rep = FockRep(diff.n, L)
    return _section_check("pointwise_dominance", lambda r: assemble(diff, rep, r), _grid(r_grid), L, tol)


def constant_is_positive(series: CoeffSeries, tol: float = PSD_TOL) -> bool:
    a0 = series.constant()
    if np.max(np.abs(a0 - a0.conj().T), initial=0.0) > 1e-12 * max(1.0, float(np.max(np.abs(a0)))):
        return False
    return psd_check(a0, tol).is_psd


def require(check: HypothesisCheck) -> HypothesisCheck:
    if not check.established:
        raise HypothesisError(
            f"hypothesis {check.kind} violated at level {check.level}, r = {check.r} "
            f"(min eigenvalue {check.min_eigenvalue:.3e})"
        )
    return check


def establish_re_leq_I(
    series: CoeffSeries,
    hypothesis: HypothesisCheck | None = None,
    certificate: Certificate | None = None,
    L: int | None = None,
    r_grid: Iterable[float] | None = None,
) -> HypothesisCheck:
    """F(0) >= 0 and Re F(rS) <= I, or HypothesisError."""
    if not constant_is_positive(series):
        raise HypothesisError("F(0) is not a positive operator")
    if hypothesis is None:
        hypothesis = check_re_leq_I(series, L, r_grid, certificate)
    elif hypothesis.kind != "re_leq_I":
        raise HypothesisError(f"expected a re_leq_I hypothesis, got {hypothesis.kind}")
    return require(hypothesis)
