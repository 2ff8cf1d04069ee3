"""Seeded generators of instances whose hypotheses hold by construction."""

from __future__ import annotations

import math

import numpy as np

from .. import words as W
from ..errors import CertificateError, ValidationError
from ..fock import CoeffSeries, FockRep, assemble, max_dense_dim, qstar_q, sparse_assemble
from ..inequalities.hypotheses import CERT_TOL, Certificate, expected_terms, q_norm_bound
from ..inequalities.tuples import complex_gaussian
from ..spectra import op_norm, psd_sqrt
from ..symcalc import SymSeries, free_lift, sym_from_lift
from ..words import Word

WORDS_PER_LEVEL = 6
FIBERS_PER_LEVEL = 3


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _check_args(n: int, degree: int, d: int) -> None:
    if n < 1 or d < 1:
        raise ValidationError("n and d must be >= 1")
    if degree < 1:
        raise ValidationError("degree must be >= 1")


def random_q_terms(n: int, degree: int, d: int, rng: np.random.Generator) -> dict[Word, np.ndarray]:
    """Gaussian coefficients on at most WORDS_PER_LEVEL words per level; the top level is never empty."""
    out = {}
    for k in range(degree + 1):
        total = n**k
        count = min(total, WORDS_PER_LEVEL)
        ranks = sorted(rng.choice(total, size=count, replace=False)) if total > count else range(total)
        for value in ranks:
            w = W.unrank(n, W.level_offset(n, k) + int(value))
            out[w] = complex_gaussian(rng, (d, d))
    return out


def random_sym_q_terms(n: int, degree: int, d: int, rng: np.random.Generator) -> dict[Word, np.ndarray]:
    """Coefficients constant on whole fibers Lambda_p, on at most FIBERS_PER_LEVEL fibers per level."""
    out = {}
    for k in range(degree + 1):
        ps = W.multi_indices(n, k)
        picks = rng.choice(len(ps), size=min(len(ps), FIBERS_PER_LEVEL), replace=False)
        for j in sorted(int(i) for i in picks):
            p = ps[j]
            c = complex_gaussian(rng, (d, d)) * (p.factorial / math.factorial(p.size))
            for w in W.lambda_set(p):
                out[w] = c
    return out


def _normalize_q(q: dict[Word, np.ndarray], target: float) -> dict[Word, np.ndarray]:
    """Right-multiply every q_alpha by M so that sum q_alpha^* q_alpha = target * I."""
    d = next(iter(q.values())).shape[0]
    g = sum(a.conj().T @ a for a in q.values())
    g = (g + g.conj().T) / 2
    lam = np.linalg.eigvalsh(g)
    if lam[0] <= 1e-12 * max(1.0, lam[-1]):
        raise ValidationError("cannot normalize a Q whose Gram sum is singular")
    w, v = np.linalg.eigh(g)
    m = (v / np.sqrt(w)) @ v.conj().T * math.sqrt(target)
    out = {k: a @ m for k, a in q.items()}
    if d == 1:
        out = {k: a.astype(complex) for k, a in out.items()}
    return out


def validate_qq_expansion(
    q_terms: dict[Word, np.ndarray], n: int, d: int, degree: int, tol: float = CERT_TOL
) -> int:
    """Compare the band of Q^*Q with Q(S)^*Q(S) assembled independently.

    Uses the largest level L <= 2 * degree that fits the dense cap; on levels <= L - degree the
    truncated product coincides with the compression of Q^*Q.  Returns L.
    """
    L = 2 * degree
    while L > degree and W.basis_size(n, L) * d > max_dense_dim():
        L -= 1
    rep = FockRep(n, L)
    keep = W.basis_size(n, L - degree) * d
    q = sparse_assemble(CoeffSeries(n, "holomorphic", d, q_terms), rep, 1.0)[:, :keep]
    prod = (q.conj().T @ q).toarray()
    band = CoeffSeries(n, "harmonic", d, qstar_q(q_terms, n, d))
    h = sparse_assemble(band, rep, 1.0)[:keep, :keep].toarray()
    err = float(np.max(np.abs(prod - h)))
    if err > tol * max(1.0, float(np.max(np.abs(h)))):
        raise CertificateError(f"Q^*Q expansion disagrees with the assembled product ({err:.3e})")
    return L


def generate_qq_positive(n: int, degree: int, seed: int, d: int = 1) -> tuple[CoeffSeries, Certificate]:
    """Harmonic H = Q^*Q (positive by construction)."""
    _check_args(n, degree, d)
    rng = _rng(seed)
    q = random_q_terms(n, degree, d, rng)
    validate_qq_expansion(q, n, d, degree)
    cert = Certificate("qq", q)
    return CoeffSeries(n, "harmonic", d, cert.band(n, d)), cert


def generate_re_leq_I(
    n: int, degree: int, seed: int, d: int = 1, margin: float = 0.1, a0: float | None = None
) -> tuple[CoeffSeries, Certificate]:
    """Holomorphic F with F(0) = a_0 I and 2I - F - F^* = Q^*Q exactly."""
    _check_args(n, degree, d)
    if not 0 < margin < 1:
        raise ValidationError("margin must lie in (0, 1)")
    rng = _rng(seed)
    if a0 is None:
        a0 = float(rng.uniform(0.0, 1.0 - margin))
    if not 0 <= a0 < 1:
        raise ValidationError("a_0 must lie in [0, 1)")
    q = _normalize_q(random_q_terms(n, degree, d, rng), 2 * (1 - a0))
    validate_qq_expansion(q, n, d, degree)
    cert = Certificate("re_leq_I", q, meta={"a0": a0})
    return CoeffSeries(n, "holomorphic", d, expected_terms(cert, n, d)), cert


def generate_dominated_pair(
    n: int, degree: int, seed: int, d: int = 1, zero_gap: bool = False
) -> tuple[CoeffSeries, CoeffSeries, Certificate]:
    """(A, B, certificate) with H_B - H_A = Q^*Q; ``zero_gap`` gives Q = 0 and A = B."""
    _check_args(n, degree, d)
    rng = _rng(seed)
    terms = {}
    for w in W.words_up_to(n, degree):
        if len(w) == 0:
            h = complex_gaussian(rng, (d, d))
            terms[w] = (h + h.conj().T) / 2
        elif rng.random() < 0.7 or len(w) == degree:
            terms[w] = complex_gaussian(rng, (d, d))
    lower = CoeffSeries(n, "harmonic", d, terms)
    if zero_gap:
        q = {W.identity(n): np.zeros((d, d), dtype=complex)}
    else:
        q = random_q_terms(n, degree, d, rng)
        validate_qq_expansion(q, n, d, degree)
    cert = Certificate("dominance", q)
    band = CoeffSeries(n, "harmonic", d, cert.band(n, d))
    return lower, lower.combine(band), cert


def generate_harmonic_contraction(n: int, degree: int, seed: int) -> tuple[CoeffSeries, Certificate]:
    """Scalar harmonic H = I - Q^*Q / c with c = (sum_k ||q_k||)^2, so 0 <= H <= I."""
    _check_args(n, degree, 1)
    rng = _rng(seed)
    q = random_q_terms(n, degree, 1, rng)
    validate_qq_expansion(q, n, 1, degree)
    scale = q_norm_bound(q, n, 1) ** 2
    cert = Certificate("contraction_qq", q, scale=scale)
    return CoeffSeries(n, "harmonic", 1, expected_terms(cert, n, 1)), cert


def generate_contractive(
    n: int, degree: int, seed: int, d: int = 1, L: int | None = None, margin: float = 0.0
) -> CoeffSeries:
    """Holomorphic F = c Q scaled so that its level-L section has norm 1 - margin (L defaults to degree)."""
    _check_args(n, degree, d)
    rng = _rng(seed)
    q = CoeffSeries(n, "holomorphic", d, random_q_terms(n, degree, d, rng))
    L = degree if L is None else L
    if L < degree:
        raise ValidationError("normalization level must be >= degree")
    norm = op_norm(assemble(q, FockRep(n, L), 1.0))
    c = (1.0 - margin) / norm
    return q.map(lambda w, a: c * a)


def generate_sym(
    n: int, degree: int, seed: int, d: int = 1, margin: float = 0.1
) -> tuple[SymSeries, Certificate]:
    """Symmetric f with certified Re f_sym <= I; the certificate lives on the free lift."""
    _check_args(n, degree, d)
    rng = _rng(seed)
    a0 = float(rng.uniform(0.0, 1.0 - margin))
    q = _normalize_q(random_sym_q_terms(n, degree, d, rng), 2 * (1 - a0))
    validate_qq_expansion(q, n, d, degree)
    cert = Certificate("re_leq_I", q, meta={"a0": a0})
    lift = CoeffSeries(n, "holomorphic", d, expected_terms(cert, n, d))
    s = sym_from_lift(lift, band=degree + 1)
    if max(float(np.max(np.abs(a - lift.coeff(w)))) for w, a in free_lift(s).terms.items()) > CERT_TOL:
        raise CertificateError("symmetric lift does not reproduce the certified series")
    return s, cert


def generate_trig_pair(m: int, seed: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One-sided coefficients (a, b) of real trig polynomials with g - f = |h|^2, and h."""
    if m < 2:
        raise ValidationError("m must be >= 2")
    rng = _rng(seed)
    a = complex_gaussian(rng, m)
    a[0] = rng.standard_normal()
    h = complex_gaussian(rng, m)
    c = np.array([np.sum(np.conj(h[: m - k]) * h[k:]) for k in range(m)])
    b = a + c
    b[0] = b[0].real
    return a, b, h


def random_posi_instance(rng: np.random.Generator, d: int, m: int) -> tuple[np.ndarray, list[np.ndarray]]:
    """P >= 0 (sometimes singular) and X_i scaled so the border sits near the PSD boundary."""
    rank = int(rng.integers(1, d + 1))
    g = complex_gaussian(rng, (rank, d))
    p = g.conj().T @ g
    root = psd_sqrt(p)
    xs = [root @ complex_gaussian(rng, (d, d)) @ root for _ in range(m)]
    s = sum(x @ x.conj().T for x in xs)
    target = float(rng.uniform(0.5, 1.5))
    size = math.sqrt(max(np.linalg.eigvalsh((s + s.conj().T) / 2)[-1], 1e-300))
    scale = target * float(np.linalg.eigvalsh(p)[-1]) / size
    return p, [scale * x for x in xs]
