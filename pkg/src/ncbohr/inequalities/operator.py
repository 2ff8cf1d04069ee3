"""Verifiers for series with operator (d x d matrix) coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .. import radii
from .. import words as W
from ..errors import ValidationError
from ..fock import CoeffSeries, FockRep, graded_row_norm, word_operator
from ..serialize import matrix_to_json, series_to_json
from ..spectra import (
    PSD_TOL,
    PsdVerdict,
    joint_radius_estimate,
    op_norm,
    psd_check,
    psd_sqrt,
)
from ..words import Word
from . import tuples as TU
from .hypotheses import (
    Certificate,
    check_norm_leq_1,
    default_level,
    establish_re_leq_I,
    require,
)
from .report import (
    SLACK_TOL,
    HypothesisCheck,
    VerificationReport,
    make_report,
    operator_margin,
    psd_margin,
    scalar_margin,
)

BUDGET_TOL = 1e-12
DEFAULT_GEN_GRID = tuple(round(0.05 * i, 2) for i in range(20))
SPOT_DIM = 2


def _operator_series(series: CoeffSeries) -> None:
    if series.kind not in ("holomorphic", "polynomial"):
        raise ValidationError(f"expected a holomorphic series, got {series.kind}")


def _herm(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2


def _gram_root(series: CoeffSeries, k: int) -> np.ndarray:
    return psd_sqrt(_herm(series.gram(k)))


# -- P_k and the tensor bound -------------------------------------------------


def pk_matrix(series: CoeffSeries, k: int) -> np.ndarray:
    """Block matrix with diagonal 2(I - A_0), first block row [A_alpha^*] and first block column [A_alpha]."""
    if k < 1:
        raise ValidationError("P_k is defined for k >= 1")
    d = series.coeff_dim
    c0 = 2 * (np.eye(d) - series.constant())
    ws = W.enumerate_words(series.n, k)
    size = (1 + len(ws)) * d
    p = np.zeros((size, size), dtype=complex)
    for j in range(1 + len(ws)):
        p[j * d : (j + 1) * d, j * d : (j + 1) * d] = c0
    for j, w in enumerate(ws, start=1):
        a = series.coeff(w)
        p[j * d : (j + 1) * d, :d] = a
        p[:d, j * d : (j + 1) * d] = a.conj().T
    return p


def pk_positivity(
    series: CoeffSeries,
    k: int,
    hypothesis: HypothesisCheck | None = None,
    certificate: Certificate | None = None,
    tol: float = PSD_TOL,
) -> PsdVerdict:
    """PSD verdict of P_k for a series with F(0) >= 0 and Re F <= I."""
    _operator_series(series)
    establish_re_leq_I(series, hypothesis, certificate)
    return psd_check(_herm(pk_matrix(series, k)), tol)


def y_budget(ys: Mapping[Word, np.ndarray]) -> float:
    """sum_{k>=1} ||sum_{|alpha|=k} Y_alpha^* Y_alpha||^{1/2}."""
    levels: dict[int, np.ndarray] = {}
    for w, y in ys.items():
        if len(w) == 0:
            continue
        levels[len(w)] = levels.get(len(w), 0) + y.conj().T @ y
    return math.fsum(math.sqrt(max(np.linalg.eigvalsh(_herm(g))[-1], 0.0)) for g in levels.values())


def _check_ys(n: int, ys: Mapping) -> dict[Word, np.ndarray]:
    out = {}
    size = None
    for w, y in ys.items():
        w = w if isinstance(w, Word) else Word(tuple(w), n)
        if w.n != n:
            raise ValidationError("Y words and series use different generator counts")
        y = np.asarray(y, dtype=complex)
        if y.ndim == 0:
            y = y.reshape(1, 1)
        if size is None:
            size = y.shape
        if y.shape != size or y.shape[0] != y.shape[1]:
            raise ValidationError("Y coefficients must be square and of equal size")
        out[w] = y
    if not out:
        raise ValidationError("empty Y sequence")
    return out


def tensor_operator(series: CoeffSeries, ys: Mapping[Word, np.ndarray], L: int) -> np.ndarray:
    """sum_alpha S_alpha (x) A_alpha (x) Y_alpha on the level-L truncation."""
    rep = FockRep(series.n, L)
    d = series.coeff_dim
    dy = next(iter(ys.values())).shape[0]
    rep.check_dense(d * dy)
    out = np.zeros((rep.dim * d * dy,) * 2, dtype=complex)
    for w, a in series.terms.items():
        y = ys.get(w)
        if y is None or len(w) > L:
            continue
        out += np.kron(word_operator(rep, w), np.kron(a, y))
    return out


def tensor_bound_check(
    series: CoeffSeries,
    ys: Mapping,
    L: int | None = None,
    hypothesis: HypothesisCheck | None = None,
    certificate: Certificate | None = None,
    tol: float = SLACK_TOL,
) -> VerificationReport:
    """||sum S_alpha (x) A_alpha (x) Y_alpha|| <= 1 under the Y budget.

    The norm is computed on the level-L truncation, a compression of the full operator.
    """
    _operator_series(series)
    ys = _check_ys(series.n, ys)
    hyp = establish_re_leq_I(series, hypothesis, certificate)
    y0 = ys.get(W.identity(series.n))
    if y0 is not None and op_norm(y0) > 1 + BUDGET_TOL:
        raise ValidationError(f"||Y_0|| = {op_norm(y0):.6g} exceeds 1")
    budget = y_budget(ys)
    if budget > 0.5 + BUDGET_TOL:
        raise ValidationError(f"Y budget {budget:.6g} exceeds 1/2")
    dy = next(iter(ys.values())).shape[0]
    if L is None:
        L = default_level(series.n, series.coeff_dim * dy, max(series.degree, 1))
    report = make_report(
        "tensor_bound",
        {"series": series_to_json(series), "y": [[w.to_json(), matrix_to_json(y)] for w, y in sorted(ys.items())]},
        L=L,
    )
    report.hypothesis = hyp
    report.tolerances["slack"] = tol
    report.levels.update(L=L, y_budget=budget)
    norm = op_norm(tensor_operator(series, ys, L))
    report.add(scalar_margin(f"tensor norm at level {L}", norm, 1.0, tol))
    return report


# -- bohr-gen -----------------------------------------------------------------


def bohr_gen_checks(
    series: CoeffSeries,
    hypothesis: HypothesisCheck | None = None,
    certificate: Certificate | None = None,
    r_grid: Iterable[float] = DEFAULT_GEN_GRID,
    spot_checks: int = 2,
    seed: int = 0,
    L: int | None = None,
    tol: float = SLACK_TOL,
) -> VerificationReport:
    """Coefficient, r-sum and tuple bounds for F(0) >= 0, Re F <= I.

    Parts: (i) ||F(S (x) Y)|| <= 1 for column norm(Y) <= 1/3 (spot checks);
    (ii) sum A^*A <= 4(I - A_0); (iii) ||sum A^*A||^{1/2} <= 2||I - A_0||;
    (iv) sum_k r^k (sum A^*A)^{1/2} <= M(r) I; (v) A_0 + sum_{k>=1} r^k sum A^*(I - A_0)^{-1} A
    <= K(r) I when ||A_0|| < 1; (vi) sum_k r^k ||sum A^*A||^{1/2} <= ||A_0|| + ||I - A_0||
    for r <= 1/3; plus the tuple form sum_k ||sum T_alpha (x) A_alpha|| of (vi).
    """
    _operator_series(series)
    hyp = establish_re_leq_I(series, hypothesis, certificate)
    rs = sorted({float(r) for r in r_grid})
    if any(not 0 <= r < 1 for r in rs):
        raise ValidationError("bohr-gen radii must lie in [0, 1)")
    d, deg = series.coeff_dim, series.degree
    eye = np.eye(d)
    a0 = series.constant()
    report = make_report("bohr_gen", series_to_json(series), r=rs, spot_checks=spot_checks, seed=seed, L=L)
    report.hypothesis = hyp
    report.tolerances["slack"] = tol

    rng = np.random.default_rng(seed)
    for s in range(spot_checks):
        ys_tuple = [y.conj().T for y in TU.random_row_tuple(series.n, SPOT_DIM, 1 / 3, rng)]
        ys = TU.word_products(ys_tuple, deg)
        sub = tensor_bound_check(series, ys, L=L, hypothesis=hyp, tol=tol)
        report.levels["L"] = sub.levels["L"]
        m = sub.margins[0]
        report.add(scalar_margin(f"(i) ||F(S (x) Y)|| <= 1, sample {s}", m.lhs, m.rhs, tol))

    for k in range(1, deg + 1):
        report.add(operator_margin(f"(ii) sum A^*A <= 4(I - A_0), k={k}", series.gram(k), 4 * (eye - a0), tol))
    gap = op_norm(eye - a0)
    for k in range(1, deg + 1):
        report.add(scalar_margin(f"(iii) ||sum A^*A||^(1/2) <= 2||I - A_0||, k={k}", graded_row_norm(series, k), 2 * gap, tol))

    roots = [_gram_root(series, k) for k in range(deg + 1)]
    for r in rs:
        lhs = sum(r**k * roots[k] for k in range(deg + 1))
        report.add(operator_margin(f"(iv) r-sum of Gram roots <= M(r), r={r:g}", lhs, radii.bound_M(r) * eye, tol))

    if op_norm(a0) < 1:
        inv = np.linalg.inv(eye - a0)
        terms = [sum((a.conj().T @ inv @ a for _, a in series.slice(k)), np.zeros((d, d))) for k in range(deg + 1)]
        for r in rs:
            lhs = a0 + sum(r**k * terms[k] for k in range(1, deg + 1))
            report.add(operator_margin(f"(v) A_0 + r-sum <= K(r), r={r:g}", _herm(lhs), radii.bound_K(r) * eye, tol))
    else:
        report.notice("(v) skipped: ||A_0|| >= 1")

    bound = op_norm(a0) + gap
    norms = [graded_row_norm(series, k) for k in range(deg + 1)]
    for r in [r for r in rs if r <= 1 / 3] + [1 / 3]:
        lhs = math.fsum(r**k * norms[k] for k in range(deg + 1))
        report.add(scalar_margin(f"(vi) r-sum of Gram norms <= ||A_0|| + ||I - A_0||, r={r:.6g}", lhs, bound, tol))

    for s in range(spot_checks):
        ts = TU.random_row_tuple(series.n, SPOT_DIM, 1 / 3, rng)
        report.add(
            scalar_margin(f"(vi) tuple sum at row norm 1/3, sample {s}", TU.bohr_tuple_sum(series, ts, absolute=False), bound, tol)
        )
    return report


# -- oper-gen -----------------------------------------------------------------


def oper_gen_checks(
    series: CoeffSeries,
    L: int | None = None,
    r_grid: Iterable[float] = DEFAULT_GEN_GRID,
    hypothesis: HypothesisCheck | None = None,
    certificate: Certificate | None = None,
    tol: float = SLACK_TOL,
) -> VerificationReport:
    """Coefficient bounds for a contractive multi-analytic F (||F(S)|| <= 1).

    The hypothesis is checked on the level-L section at r = 1; every part below only
    involves compressions of F(S) that live inside that section once L >= degree.
    """
    _operator_series(series)
    deg = series.degree
    if hypothesis is None:
        if L is None:
            L = max(deg, 1)
        hypothesis = check_norm_leq_1(series, L, (1.0,), certificate)
    require(hypothesis)
    rs = sorted({float(r) for r in r_grid})
    if any(not 0 <= r < 1 for r in rs):
        raise ValidationError("oper-gen radii must lie in [0, 1)")
    d = series.coeff_dim
    eye = np.eye(d)
    a0 = series.constant()
    report = make_report("oper_gen", series_to_json(series), r=rs, L=L)
    report.hypothesis = hypothesis
    report.tolerances["slack"] = tol
    if hypothesis.level is not None:
        report.levels["L"] = hypothesis.level

    defect = _herm(eye - a0.conj().T @ a0)
    defect_root = psd_sqrt(defect)
    roots = [_gram_root(series, k) for k in range(deg + 1)]
    for k in range(1, deg + 1):
        report.add(operator_margin(f"(i) (sum A^*A)^(1/2) <= (I - A_0^*A_0)^(1/2), k={k}", roots[k], defect_root, tol))
    for r in rs:
        lhs = sum(r**k * roots[k] for k in range(deg + 1))
        bound = math.sqrt(1 + r**2 / (1 - r) ** 2)
        report.add(operator_margin(f"(ii) r-sum of Gram roots <= (1 + r^2/(1-r)^2)^(1/2), r={r:g}", lhs, bound * eye, tol))

    if op_norm(a0) < 1:
        inv = np.linalg.inv(eye - a0 @ a0.conj().T)
        for k in range(1, deg + 1):
            lhs = sum((a.conj().T @ inv @ a for _, a in series.slice(k)), np.zeros((d, d)))
            report.add(operator_margin(f"(iii) sum A^*(I - A_0A_0^*)^(-1)A <= I - A_0^*A_0, k={k}", _herm(lhs), defect, tol))
        if np.allclose(a0, a0.conj().T, atol=1e-12) and psd_check(_herm(a0)).is_psd:
            inv2 = np.linalg.inv(eye - a0 @ a0)
            terms = [sum((a.conj().T @ inv2 @ a for _, a in series.slice(k)), np.zeros((d, d))) for k in range(deg + 1)]
            for r in rs:
                lhs = a0 @ a0 + sum(r**k * terms[k] for k in range(1, deg + 1))
                report.add(operator_margin(f"(iv) A_0^2 + r-sum <= N(r), r={r:g}", _herm(lhs), radii.bound_N(r) * eye, tol))
        else:
            report.notice("(iv) skipped: A_0 is not positive")
    else:
        report.notice("(iii) and (iv) skipped: ||A_0|| >= 1")
    return report


# -- joint numerical radius ---------------------------------------------------


def joint_radius_bohr_check(
    series: CoeffSeries,
    m: int | None = None,
    hypothesis: HypothesisCheck | None = None,
    certificate: Certificate | None = None,
    radius_tol: float = 1e-6,
    max_level: int | None = None,
    tol: float = SLACK_TOL,
) -> VerificationReport:
    """w(A_alpha^*: |alpha|=k) <= 2||I - A_0|| cos(pi/(floor((m-1)/k)+2)) and the t_m sum.

    w is computed on a truncation (a lower bound for w) unless the coefficients are scalar.
    """
    _operator_series(series)
    hyp = establish_re_leq_I(series, hypothesis, certificate)
    m = max(series.degree + 1, 2) if m is None else int(m)
    if series.degree > m - 1:
        raise ValidationError(f"series degree {series.degree} exceeds the band m-1 = {m - 1}")
    a0 = series.constant()
    gap = op_norm(np.eye(series.coeff_dim) - a0)
    t_m = radii.solve_t(m)
    report = make_report("joint_radius_bohr", series_to_json(series), m=m, radius_tol=radius_tol, max_level=max_level)
    report.hypothesis = hyp
    report.tolerances.update(slack=tol, radius=radius_tol)
    report.levels.update(m=m, t_m=t_m)
    ws = [op_norm(a0)]
    for k in range(1, m):
        xs = [series.coeff(w).conj().T for w in W.enumerate_words(series.n, k)]
        est = joint_radius_estimate(xs, tol=radius_tol, max_level=max_level)
        report.levels[f"joint_level_k{k}"] = est.level
        if not est.stabilized:
            report.notice(f"k={k}: joint radius not stabilized by level {est.level}; value is a lower bound")
        ws.append(est.value)
        report.add(scalar_margin(f"joint radius bound, k={k}", est.value, 2 * gap * radii.cos_factor(m, k), tol))
    total = math.fsum(t_m**k * w for k, w in enumerate(ws))
    report.add(scalar_margin(f"joint radius sum at t_{m}", total, op_norm(a0) + gap, tol))
    return report


# -- block positivity equivalence ---------------------------------------------


def posi_m(p: np.ndarray, xs: Sequence[np.ndarray]) -> np.ndarray:
    """[[P, X_1^*, ..., X_m^*], [X_1, P, 0, ...], ..., [X_m, 0, ..., P]]."""
    d, m = p.shape[0], len(xs)
    out = np.kron(np.eye(m + 1), p).astype(complex)
    for i, x in enumerate(xs, start=1):
        out[i * d : (i + 1) * d, :d] = x
        out[:d, i * d : (i + 1) * d] = x.conj().T
    return out


def posi_isometries(m: int, level: int) -> list[np.ndarray]:
    """Creation operators on F^2(H_m) restricted to levels <= level - 1, into levels <= level.

    These are exact isometries with orthogonal ranges.
    """
    rep = FockRep(m, level)
    cols = W.basis_size(m, level - 1)
    return [word_operator(rep, W.generator(m, i))[:, :cols] for i in range(1, m + 1)]


def posi_n(p: np.ndarray, xs: Sequence[np.ndarray], level: int = 2) -> np.ndarray:
    """[[I (x) P, sum V_i (x) X_i], [sum V_i^* (x) X_i^*, I (x) P]]."""
    vs = posi_isometries(len(xs), level)
    k1, k0 = vs[0].shape
    top = sum(np.kron(v, x) for v, x in zip(vs, xs))
    return np.block([[np.kron(np.eye(k1), p), top], [top.conj().T, np.kron(np.eye(k0), p)]])


def posi_equivalence_check(
    p: np.ndarray, xs: Sequence[np.ndarray], level: int = 2, tol: float = PSD_TOL
) -> VerificationReport:
    """Compare the PSD verdicts of the bordered matrix M(P, X) and the isometric dilation N(P, X)."""
    p = np.asarray(p, dtype=complex)
    xs = [np.asarray(x, dtype=complex) for x in xs]
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValidationError("P must be square")
    if not xs or any(x.shape != p.shape for x in xs):
        raise ValidationError("every X_i must have the shape of P")
    if level < 1:
        raise ValidationError("isometry level must be >= 1")
    report = make_report(
        "posi_equivalence", {"P": matrix_to_json(p), "X": [matrix_to_json(x) for x in xs]}, level=level
    )
    vm = psd_check(_herm(posi_m(p, xs)), tol)
    vn = psd_check(_herm(posi_n(p, xs, level)), tol)
    report.tolerances["psd"] = tol
    report.levels.update(level=level, M_min_eigenvalue=vm.min_eigenvalue, N_min_eigenvalue=vn.min_eigenvalue)
    report.notice(f"M: {vm.verdict}; N: {vn.verdict}")
    report.add(scalar_margin("PSD verdicts of M and N agree", float(vm.is_psd != vn.is_psd), 0.0, 0.0))
    return report


# -- multi-Toeplitz kernel ----------------------------------------------------


@dataclass(frozen=True)
class MultiToeplitzSection:
    q: int
    r: float
    entries: np.ndarray
    words: tuple[Word, ...]


def kernel_entry(series: CoeffSeries, alpha: Word, beta: Word, r: float) -> np.ndarray:
    """K(alpha, beta) with C_0 = 2(I - A_0), C_gamma = -A_gamma."""
    d = series.coeff_dim
    if alpha == beta:
        return 2 * (np.eye(d) - series.constant())
    omega = W.divide(alpha, beta)
    if omega is not None:
        return -(r ** len(omega)) * series.coeff(W.reverse(omega))
    omega = W.divide(beta, alpha)
    if omega is not None:
        return -(r ** len(omega)) * series.coeff(W.reverse(omega)).conj().T
    return np.zeros((d, d), dtype=complex)


def multi_toeplitz_section(
    series: CoeffSeries,
    r: float,
    q: int,
    hypothesis: HypothesisCheck | None = None,
    certificate: Certificate | None = None,
    tol: float = PSD_TOL,
) -> tuple[MultiToeplitzSection, PsdVerdict]:
    """The kernel matrix over words of length <= q and its PSD verdict."""
    _operator_series(series)
    establish_re_leq_I(series, hypothesis, certificate)
    if q < 1:
        raise ValidationError("q must be >= 1")
    if not 0 <= r <= 1:
        raise ValidationError("r must lie in [0, 1]")
    d = series.coeff_dim
    FockRep(series.n, q).check_dense(d)
    ws = tuple(W.words_up_to(series.n, q))
    size = len(ws) * d
    k = np.zeros((size, size), dtype=complex)
    for i, a in enumerate(ws):
        for j, b in enumerate(ws):
            k[i * d : (i + 1) * d, j * d : (j + 1) * d] = kernel_entry(series, a, b, r)
    k.setflags(write=False)
    return MultiToeplitzSection(q, float(r), k, ws), psd_check(_herm(k), tol)


def operator_suite(
    series: CoeffSeries,
    hypothesis: HypothesisCheck | None = None,
    certificate: Certificate | None = None,
    r_grid: Iterable[float] = DEFAULT_GEN_GRID,
    toeplitz_q: int = 3,
    joint: bool = True,
    spot_checks: int = 2,
    seed: int = 0,
    tol: float = SLACK_TOL,
) -> list[VerificationReport]:
    """Every operator-coefficient check for F(0) >= 0, Re F <= I, as separate reports."""
    _operator_series(series)
    hyp = establish_re_leq_I(series, hypothesis, certificate)
    block = make_report("block_positivity", series_to_json(series), q=toeplitz_q)
    block.hypothesis = hyp
    for k in range(1, series.degree + 1):
        block.add(psd_margin(f"P_k is positive, k={k}", pk_positivity(series, k, hyp)))
    section, verdict = multi_toeplitz_section(series, 1.0, toeplitz_q, hyp)
    block.levels["q"] = toeplitz_q
    block.add(psd_margin(f"multi-Toeplitz section is positive, q={toeplitz_q}, r=1", verdict))
    reports = [block, bohr_gen_checks(series, hyp, r_grid=r_grid, spot_checks=spot_checks, seed=seed, tol=tol)]
    if joint:
        reports.append(joint_radius_bohr_check(series, hypothesis=hyp, tol=tol))
    return reports
