"""Commutative layer: symmetrized functional calculus on the symmetric Fock space.

A function f(lambda) = sum_p lambda^p A_p is transported to the free setting by the lift
C_alpha = (p!/|p|!) A_p for every word alpha whose letter counts are p.  On the symmetric
Fock space the lift acts through the commuting creation operators B_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import radii
from . import words as W
from .errors import ValidationError
from .fock import CoeffSeries, FockRep, assemble
from .inequalities import tuples as TU
from .inequalities.hypotheses import Certificate, default_level, establish_re_leq_I
from .inequalities.operator import y_budget
from .inequalities.report import (
    SLACK_TOL,
    HypothesisCheck,
    VerificationReport,
    make_report,
    scalar_margin,
)
from .serialize import exponent_terms_to_json
from .spectra import column_norm, op_norm, row_norm
from .words import MultiIndex

GATE_TOL = 1e-12
DEFAULT_SYM_GRID = (0.25, 0.5, 0.75, 0.9, 0.99, 1.0)
SPOT_DIM = 2
SYM_DIM_CAP = 4096


@dataclass(frozen=True)
class SymSeries:
    """sum_p lambda^p A_p with d x d coefficients.

    ``band = m`` declares a polynomial of degree <= m - 1; ``band = None`` marks a truncation
    of an infinite series, for which the growth gate
    ||sum_{|p|=k} (|p|!/p!) A_p^* A_p||^{1/(2k)} <= 1 is enforced at the top stored degree.
    """

    n: int
    coeff_dim: int
    terms: Mapping[MultiIndex, np.ndarray] = field(default_factory=dict)
    band: int | None = None

    def __post_init__(self) -> None:
        if self.n < 1 or self.coeff_dim < 1:
            raise ValidationError("n and coeff_dim must be >= 1")
        clean = {}
        for p, a in self.terms.items():
            if not isinstance(p, MultiIndex):
                p = MultiIndex(tuple(p))
            if p.n != self.n:
                raise ValidationError(f"exponent vector {p.exponents} has length != n={self.n}")
            a = np.array(a, dtype=complex)
            if a.ndim == 0:
                a = a.reshape(1, 1)
            if a.shape != (self.coeff_dim, self.coeff_dim):
                raise ValidationError(f"coefficient for {p.exponents} has shape {a.shape}")
            a.setflags(write=False)
            clean[p] = a
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda kv: (kv[0].size, [-e for e in kv[0].exponents]))))
        if self.band is not None:
            if self.band < 2:
                raise ValidationError("band must be >= 2")
            if self.degree > self.band - 1:
                raise ValidationError(f"degree {self.degree} exceeds band m-1 = {self.band - 1}")
        elif self.degree > 0:
            top = self.gate_values()[-1]
            if top > 1 + GATE_TOL:
                raise ValidationError(f"growth gate fails at degree {self.degree}: {top:.6g} > 1")

    @property
    def degree(self) -> int:
        return max((p.size for p, a in self.terms.items() if np.any(a != 0)), default=0)

    @property
    def is_scalar(self) -> bool:
        return self.coeff_dim == 1

    def coeff(self, p: MultiIndex | Sequence[int]) -> np.ndarray:
        p = p if isinstance(p, MultiIndex) else MultiIndex(tuple(p))
        a = self.terms.get(p)
        return np.zeros((self.coeff_dim,) * 2, dtype=complex) if a is None else a

    def constant(self) -> np.ndarray:
        return self.coeff((0,) * self.n)

    def slice(self, k: int) -> list[tuple[MultiIndex, np.ndarray]]:
        return [(p, a) for p, a in self.terms.items() if p.size == k]

    def sym_gram(self, k: int) -> np.ndarray:
        """sum_{|p|=k} (p!/|p|!) A_p^* A_p, the Gram of the lift at degree k."""
        g = np.zeros((self.coeff_dim,) * 2, dtype=complex)
        for p, a in self.slice(k):
            g += (p.factorial / math.factorial(p.size)) * (a.conj().T @ a)
        return g

    def gate_values(self) -> list[float]:
        """||sum_{|p|=k} (|p|!/p!) A_p^* A_p||^{1/(2k)} for k = 1..degree."""
        out = []
        for k in range(1, self.degree + 1):
            g = sum((p.multinomial * (a.conj().T @ a) for p, a in self.slice(k)), np.zeros((self.coeff_dim,) * 2))
            out.append(max(np.linalg.eigvalsh((g + g.conj().T) / 2)[-1], 0.0) ** (1 / (2 * k)))
        return out

    def scalar_values(self, lam: np.ndarray, absolute: bool = False) -> list[complex]:
        """Degree-k parts sum_{|p|=k} lambda^p a_p (or |a_p|) for a scalar series."""
        if not self.is_scalar:
            raise ValidationError("scalar values need coeff_dim == 1")
        out = []
        for k in range(self.degree + 1):
            s = 0j
            for p, a in self.slice(k):
                c = abs(a[0, 0]) if absolute else a[0, 0]
                s += c * np.prod([lam[i] ** e for i, e in enumerate(p.exponents)])
            out.append(s)
        return out


def free_lift(s: SymSeries) -> CoeffSeries:
    """The free series with C_alpha = (p!/|p|!) A_p for alpha in Lambda_p."""
    terms = {}
    for p, a in s.terms.items():
        weight = p.factorial / math.factorial(p.size)
        for w in W.lambda_set(p):
            terms[w] = weight * a
    return CoeffSeries(s.n, "holomorphic", s.coeff_dim, terms)


def sym_from_lift(lift: CoeffSeries, band: int | None = None, tol: float = 1e-12) -> SymSeries:
    """Inverse of free_lift; raises if the free coefficients are not constant on each Lambda_p."""
    groups: dict[MultiIndex, list[np.ndarray]] = {}
    for w, a in lift.terms.items():
        groups.setdefault(MultiIndex(w.counts()), []).append(a)
    terms = {}
    for p, mats in groups.items():
        fiber = len(W.lambda_set(p))
        full = mats + [np.zeros_like(mats[0])] * (fiber - len(mats))
        if any(np.max(np.abs(m - full[0])) > tol * max(1.0, np.max(np.abs(full[0]))) for m in full):
            raise ValidationError(f"free coefficients are not symmetric on the fiber of {p.exponents}")
        terms[p] = full[0] * (math.factorial(p.size) / p.factorial)
    return SymSeries(lift.n, lift.coeff_dim, terms, band)


# -- symmetric Fock space operators -------------------------------------------


def symmetric_labels(n: int, L: int) -> list[MultiIndex]:
    return [p for k in range(L + 1) for p in W.multi_indices(n, k)]


def symmetric_creation(n: int, L: int) -> list[np.ndarray]:
    """B_1..B_n on the symmetric Fock space truncated at degree L.

    In the normalized fiber basis, B_i sends v_p to sqrt((p_i + 1)/(|p| + 1)) v_{p + e_i}.
    """
    labels = symmetric_labels(n, L)
    index = {p: j for j, p in enumerate(labels)}
    if len(labels) > SYM_DIM_CAP:
        raise ValidationError(f"symmetric section of size {len(labels)} exceeds the cap {SYM_DIM_CAP}")
    out = []
    for i in range(n):
        b = np.zeros((len(labels), len(labels)))
        for p in labels:
            if p.size == L:
                continue
            q = list(p.exponents)
            q[i] += 1
            b[index[MultiIndex(tuple(q))], index[p]] = math.sqrt((p.exponents[i] + 1) / (p.size + 1))
        out.append(b)
    return out


def sym_monomial(bs: Sequence[np.ndarray], p: MultiIndex) -> np.ndarray:
    return TU.monomials(bs, p)


def sym_operator(s: SymSeries, L: int, extra: Mapping[MultiIndex, np.ndarray] | None = None) -> np.ndarray:
    """sum_p B^p (x) A_p (x) Y_p on the symmetric section (Y_p = 1 when ``extra`` is None)."""
    bs = symmetric_creation(s.n, L)
    out = None
    for p, a in s.terms.items():
        if p.size > L:
            continue
        coeff = a if extra is None else np.kron(a, extra.get(p, np.zeros_like(next(iter(extra.values())))))
        term = np.kron(sym_monomial(bs, p), coeff)
        out = term if out is None else out + term
    if out is None:
        size = len(symmetric_labels(s.n, L)) * s.coeff_dim
        if extra is not None:
            size *= next(iter(extra.values())).shape[0]
        out = np.zeros((size, size), dtype=complex)
    return out


def sym_norm(s: SymSeries, L: int | None = None, r_grid: Iterable[float] | None = None) -> float:
    """max over r of ||f_sym(rS)|| on the level-L Fock section, a lower bound for ||f||_sym."""
    lift = free_lift(s)
    if L is None:
        L = default_level(s.n, s.coeff_dim, max(s.degree, 1))
    rep = FockRep(s.n, L)
    rs = tuple(DEFAULT_SYM_GRID if r_grid is None else r_grid)
    return max(op_norm(assemble(lift, rep, r)) for r in rs)


# -- verifier -----------------------------------------------------------------


def _random_y_budget(s: SymSeries, rng: np.random.Generator, dy: int) -> dict[MultiIndex, np.ndarray]:
    """Random Y_p with ||Y_0|| = 1 and each level contributing 1/(2 deg) to the budget."""
    deg = max(s.degree, 1)
    y0 = TU.complex_gaussian(rng, (dy, dy))
    ys = {MultiIndex((0,) * s.n): y0 / op_norm(y0)}
    for k in range(1, deg + 1):
        level = {p: TU.complex_gaussian(rng, (dy, dy)) for p in W.multi_indices(s.n, k)}
        g = sum(p.multinomial * (y.conj().T @ y) for p, y in level.items())
        scale = (0.5 / deg) / math.sqrt(max(np.linalg.eigvalsh((g + g.conj().T) / 2)[-1], 1e-300))
        ys.update({p: scale * y for p, y in level.items()})
    return ys


def sym_y_budget(ys: Mapping[MultiIndex, np.ndarray]) -> float:
    """sum_{k>=1} ||sum_{|p|=k} (|p|!/p!) Y_p^* Y_p||^{1/2}; equals the budget of the free lift Z_alpha = Y_p."""
    lifted = {}
    for p, y in ys.items():
        for w in W.lambda_set(p):
            lifted[w] = y
    return y_budget(lifted)


def commutative_checks(
    s: SymSeries,
    hypothesis: HypothesisCheck | None = None,
    certificate: Certificate | None = None,
    L: int | None = None,
    r_grid: Iterable[float] | None = None,
    ys: Mapping[MultiIndex, np.ndarray] | None = None,
    y_tuple: Sequence[np.ndarray] | None = None,
    t_tuple: Sequence[np.ndarray] | None = None,
    spot_checks: int = 2,
    sphere_samples: int = 200,
    seed: int = 0,
    tol: float = SLACK_TOL,
) -> VerificationReport:
    """Wiener and Bohr bounds for f with f(0) >= 0 and Re f_sym(rS) <= I.

    Parts: (i) ||sum (p!/|p|!) A^*A||^{1/2} <= 2||I - A_0||; (ii) the r-sum of those norms
    for r <= 1/3; (iii) ||sum B^p (x) A_p (x) Y_p|| <= 1 under the Y budget, and its
    scalar-point form; (iv) ||sum B^p (x) Y^p (x) A_p|| <= 1 for commuting Y with column norm
    <= 1/3; (v) sum_k ||sum T^p (x) A_p|| <= ||A_0|| + ||I - A_0|| for commuting T with row norm
    <= 1/3; and for scalar f the Bohr sum on spheres of radius 1/3 (and t_m for polynomials).
    The hypothesis is established on the free lift; sections are taken at degree L.
    """
    lift = free_lift(s)
    hyp = establish_re_leq_I(lift, hypothesis, certificate, L)
    deg = s.degree
    if L is None:
        L = max(2 * deg, 1)
        while len(symmetric_labels(s.n, L)) * s.coeff_dim * SPOT_DIM > SYM_DIM_CAP and L > deg:
            L -= 1
    d = s.coeff_dim
    eye = np.eye(d)
    a0 = s.constant()
    bound = op_norm(a0) + op_norm(eye - a0)
    rs = sorted({float(r) for r in (r_grid if r_grid is not None else (0.0, 0.1, 0.2, 0.3))})
    report = make_report(
        "commutative",
        {"n": s.n, "coeff_dim": d, "band": s.band, "terms": exponent_terms_to_json(s.terms)},
        L=L,
        r=rs,
        spot_checks=spot_checks,
        sphere_samples=sphere_samples,
        seed=seed,
    )
    report.hypothesis = hyp
    report.tolerances.update(slack=tol, commute=TU.COMMUTE_TOL)
    report.levels.update(L=L, band=s.band if s.band is not None else "inf")
    rng = np.random.default_rng(seed)

    norms = [math.sqrt(max(np.linalg.eigvalsh((g + g.conj().T) / 2)[-1], 0.0)) for g in (s.sym_gram(k) for k in range(deg + 1))]
    for k in range(1, deg + 1):
        report.add(scalar_margin(f"(i) symmetric Gram norm <= 2||I - A_0||, k={k}", norms[k], 2 * op_norm(eye - a0), tol))
    for r in [r for r in rs if 0 <= r <= 1 / 3] + [1 / 3]:
        lhs = math.fsum(r**k * norms[k] for k in range(deg + 1))
        report.add(scalar_margin(f"(ii) r-sum of symmetric Gram norms, r={r:.6g}", lhs, bound, tol))

    y_sets = [] if ys is None else [ys]
    y_sets += [_random_y_budget(s, rng, SPOT_DIM) for _ in range(spot_checks)]
    for j, yset in enumerate(y_sets):
        yset = {p if isinstance(p, MultiIndex) else MultiIndex(tuple(p)): np.asarray(y, dtype=complex) for p, y in yset.items()}
        y0 = yset.get(MultiIndex((0,) * s.n))
        budget = sym_y_budget(yset)
        if (y0 is not None and op_norm(y0) > 1 + 1e-12) or budget > 0.5 + 1e-12:
            raise ValidationError(f"Y sequence violates the budget (||Y_0|| <= 1, sum = {budget:.6g} <= 1/2)")
        val = op_norm(sym_operator(s, L, yset))
        report.add(scalar_margin(f"(iii) ||sum B^p (x) A_p (x) Y_p|| <= 1, set {j}", val, 1.0, tol))
        lam = TU.random_scalar_point(s.n, 0.999 * rng.random(), rng)
        dy = next(iter(yset.values())).shape[0]
        pt = sum(
            (np.prod([lam[i] ** e for i, e in enumerate(p.exponents)]) * np.kron(a, yset.get(p, np.zeros((dy, dy))))
             for p, a in s.terms.items()),
            np.zeros((d * dy,) * 2),
        )
        report.add(scalar_margin(f"(iii) scalar-point form, set {j}", op_norm(pt), 1.0, tol))

    y_tuples = [] if y_tuple is None else [list(y_tuple)]
    y_tuples += [[y.conj().T for y in TU.random_commuting_tuple(s.n, SPOT_DIM, 1 / 3, rng)] for _ in range(spot_checks)]
    bs = symmetric_creation(s.n, L)
    for j, yt in enumerate(y_tuples):
        yt = [np.asarray(y, dtype=complex) for y in yt]
        if len(yt) != s.n:
            raise ValidationError(f"Y tuple needs {s.n} entries")
        TU.check_commuting(yt)
        if column_norm(yt) > 1 / 3 + 1e-12:
            raise ValidationError("commuting Y tuple must have column norm <= 1/3")
        op = None
        for p, a in s.terms.items():
            if p.size > L:
                continue
            term = np.kron(sym_monomial(bs, p), np.kron(TU.monomials(yt, p), a))
            op = term if op is None else op + term
        val = 0.0 if op is None else op_norm(op)
        report.add(scalar_margin(f"(iv) commuting Y bound, tuple {j}", val, 1.0, tol))

    t_tuples = [] if t_tuple is None else [list(t_tuple)]
    t_tuples += [TU.random_commuting_tuple(s.n, SPOT_DIM, 1 / 3, rng) for _ in range(spot_checks)]
    for j, tt in enumerate(t_tuples):
        tt = [np.asarray(t, dtype=complex) for t in tt]
        if len(tt) != s.n:
            raise ValidationError(f"T tuple needs {s.n} entries")
        TU.check_commuting(tt)
        if row_norm(tt) > 1 / 3 + 1e-12:
            raise ValidationError("commuting T tuple must have row norm <= 1/3")
        total = []
        for k in range(deg + 1):
            acc = sum((np.kron(TU.monomials(tt, p), a) for p, a in s.slice(k)), np.zeros((tt[0].shape[0] * d,) * 2))
            total.append(op_norm(acc))
        report.add(scalar_margin(f"(v) commuting T Bohr sum, tuple {j}", math.fsum(total), bound, tol))

    if s.is_scalar and sphere_samples > 0:
        radii_list = [("1/3", 1 / 3)]
        if s.band is not None:
            radii_list.append((f"t_{s.band}", radii.solve_t(s.band)))
        for label, rad in radii_list:
            worst = -math.inf
            for _ in range(sphere_samples):
                lam = TU.random_scalar_point(s.n, rad, rng)
                worst = max(worst, math.fsum(abs(v) for v in s.scalar_values(lam, absolute=True)))
            report.add(scalar_margin(f"scalar Bohr sum on the sphere of radius {label} ({sphere_samples} samples)", worst, 1.0, tol))
    return report
