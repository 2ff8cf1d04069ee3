"""Truncated matrix models of the full Fock space and its creation operators.

The level-L truncation keeps the basis vectors e_alpha with |alpha| <= L.  Creation
operators raise the level by one and annihilate the top level, so every truncated
operator built here is the compression P_L X P_L of the corresponding operator on the
full Fock space.  Operators with matrix coefficients act on (Fock) x C^d with the Fock
index as the slow index, i.e. ``S_alpha (x) A`` is ``np.kron(S_alpha, A)``.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

from . import words as W
from .errors import ValidationError
from .words import MultiIndex, Word

DEFAULT_MAX_DENSE_DIM = 4096
KINDS = ("holomorphic", "harmonic", "polynomial")


def max_dense_dim() -> int:
    """Largest dense operator size (basis size times coefficient size) we will build."""
    env = os.environ.get("NCBOHR_MAX_DIM")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"NCBOHR_MAX_DIM must be an integer, got {env!r}")
    return DEFAULT_MAX_DENSE_DIM


@dataclass(frozen=True)
class FockRep:
    """Level-L truncation of F^2(H_n)."""

    n: int
    L: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}")
        W.check_level(self.n, self.L)

    @property
    def dim(self) -> int:
        return W.basis_size(self.n, self.L)

    @cached_property
    def words(self) -> tuple[Word, ...]:
        return tuple(W.words_up_to(self.n, self.L))

    def level_slice(self, k: int) -> slice:
        return slice(W.level_offset(self.n, k), W.level_offset(self.n, k + 1))

    def check_dense(self, d: int = 1) -> None:
        cap = max_dense_dim()
        if self.dim * d > cap:
            raise ValidationError(
                f"dense operator of size {self.dim * d} (n={self.n}, L={self.L}, d={d}) "
                f"exceeds the cap {cap}; set NCBOHR_MAX_DIM to raise it"
            )


def _value(letters: Iterable[int], n: int) -> int:
    v = 0
    for x in letters:
        v = v * n + (x - 1)
    return v


def _word_triplets(rep: FockRep, alpha: Word, right: bool = False):
    """Row/column indices of the partial permutation e_beta -> e_{alpha beta}.

    With ``right=True`` the map is e_beta -> e_{beta reverse(alpha)}, i.e. R_alpha.
    """
    n, k = rep.n, len(alpha)
    va = _value(alpha.letters[::-1] if right else alpha.letters, n)
    rows, cols = [], []
    for j in range(0, rep.L - k + 1):
        block = n**j
        cols_j = W.level_offset(n, j) + np.arange(block)
        if right:
            rows_j = W.level_offset(n, k + j) + np.arange(block) * n**k + va
        else:
            rows_j = W.level_offset(n, k + j) + va * block + np.arange(block)
        rows.append(rows_j)
        cols.append(cols_j)
    if not rows:
        return np.zeros(0, dtype=int), np.zeros(0, dtype=int)
    return np.concatenate(rows), np.concatenate(cols)


def word_operator(rep: FockRep, alpha: Word, right: bool = False) -> np.ndarray:
    """Matrix of S_alpha (or R_alpha when ``right``) on the truncation."""
    if alpha.n != rep.n:
        raise ValidationError(f"word over n={alpha.n} used on a rep with n={rep.n}")
    rep.check_dense()
    m = np.zeros((rep.dim, rep.dim))
    rows, cols = _word_triplets(rep, alpha, right=right)
    m[rows, cols] = 1.0
    return m


def sparse_word_operator(rep: FockRep, alpha: Word, right: bool = False) -> sp.csr_matrix:
    """Sparse S_alpha (or R_alpha); no dense-size cap applies."""
    if alpha.n != rep.n:
        raise ValidationError(f"word over n={alpha.n} used on a rep with n={rep.n}")
    rows, cols = _word_triplets(rep, alpha, right=right)
    return sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(rep.dim, rep.dim))


def left_creation(rep: FockRep, i: int) -> np.ndarray:
    if not 1 <= i <= rep.n:
        raise ValidationError(f"generator index {i} outside 1..{rep.n}")
    return word_operator(rep, W.generator(rep.n, i))


def right_creation(rep: FockRep, i: int) -> np.ndarray:
    if not 1 <= i <= rep.n:
        raise ValidationError(f"generator index {i} outside 1..{rep.n}")
    return word_operator(rep, W.generator(rep.n, i), right=True)


def flip_unitary(rep: FockRep) -> np.ndarray:
    """Permutation e_alpha -> e_{reverse(alpha)}."""
    rep.check_dense()
    u = np.zeros((rep.dim, rep.dim))
    for idx, w in enumerate(rep.words):
        u[W.rank(W.reverse(w)), idx] = 1.0
    return u


# -- coefficient series -------------------------------------------------------


def _as_matrix(value, d: int | None = None) -> np.ndarray:
    a = np.asarray(value, dtype=complex)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"coefficient must be a square matrix, got shape {a.shape}")
    if d is not None and a.shape[0] != d:
        raise ValidationError(f"coefficient has size {a.shape[0]}, expected {d}")
    return a


@dataclass(frozen=True)
class CoeffSeries:
    """Finitely supported map from words to d x d coefficients.

    For ``kind="holomorphic"`` (or ``"polynomial"``) the series stands for
    sum_alpha S_alpha (x) A_alpha.  For ``kind="harmonic"`` it stands for the
    selfadjoint sum_{|alpha|>=1} S_alpha^* (x) A_alpha^* + I (x) A_0 + sum S_alpha (x) A_alpha.
    """

    n: int
    kind: str
    coeff_dim: int
    terms: Mapping[Word, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValidationError(f"unknown series kind {self.kind!r}")
        if self.coeff_dim < 1:
            raise ValidationError("coeff_dim must be >= 1")
        clean: dict[Word, np.ndarray] = {}
        for w, a in self.terms.items():
            if not isinstance(w, Word):
                w = Word(tuple(w), self.n)
            if w.n != self.n:
                raise ValidationError(f"word {w} is over n={w.n}, series has n={self.n}")
            m = _as_matrix(a, self.coeff_dim)
            m.setflags(write=False)
            clean[w] = m
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda kv: W.rank(kv[0]))))
        if self.kind == "harmonic":
            a0 = self.constant()
            if np.max(np.abs(a0 - a0.conj().T), initial=0.0) > 1e-12 * max(1.0, np.abs(a0).max()):
                raise ValidationError("harmonic series needs a selfadjoint constant term")

    @classmethod
    def from_scalars(cls, n: int, kind: str, coeffs: Mapping) -> "CoeffSeries":
        """Build a scalar series from {letters tuple: complex}."""
        return cls(n, kind, 1, {Word(tuple(k), n): np.array([[v]]) for k, v in coeffs.items()})

    @property
    def is_scalar(self) -> bool:
        return self.coeff_dim == 1

    @property
    def degree(self) -> int:
        nz = [len(w) for w, a in self.terms.items() if np.any(a != 0)]
        return max(nz, default=0)

    def coeff(self, w: Word | tuple) -> np.ndarray:
        if not isinstance(w, Word):
            w = Word(tuple(w), self.n)
        a = self.terms.get(w)
        if a is None:
            return np.zeros((self.coeff_dim, self.coeff_dim), dtype=complex)
        return a

    def constant(self) -> np.ndarray:
        return self.coeff(W.identity(self.n))

    def slice(self, k: int) -> list[tuple[Word, np.ndarray]]:
        return [(w, a) for w, a in self.terms.items() if len(w) == k]

    def gram(self, k: int) -> np.ndarray:
        """sum_{|alpha|=k} A_alpha^* A_alpha."""
        g = np.zeros((self.coeff_dim, self.coeff_dim), dtype=complex)
        for _, a in self.slice(k):
            g += a.conj().T @ a
        return g

    def scalar_slice(self, k: int) -> np.ndarray:
        if not self.is_scalar:
            raise ValidationError("scalar_slice needs coeff_dim == 1")
        return np.array([a[0, 0] for _, a in self.slice(k)], dtype=complex)

    def map(self, fn, kind: str | None = None) -> "CoeffSeries":
        """Apply ``fn(word, matrix)`` to every term."""
        return CoeffSeries(
            self.n, kind or self.kind, self.coeff_dim, {w: fn(w, a) for w, a in self.terms.items()}
        )

    def combine(self, other: "CoeffSeries", a: float = 1.0, b: float = 1.0) -> "CoeffSeries":
        """a*self + b*other, termwise."""
        if (other.n, other.coeff_dim) != (self.n, self.coeff_dim):
            raise ValidationError("cannot combine series of different shapes")
        keys = set(self.terms) | set(other.terms)
        return CoeffSeries(
            self.n, self.kind, self.coeff_dim, {w: a * self.coeff(w) + b * other.coeff(w) for w in keys}
        )


def assemble(series: CoeffSeries, rep: FockRep, r: float = 1.0) -> np.ndarray:
    """Dense matrix of the series evaluated at (r S_1, ..., r S_n) on the truncation."""
    if series.n != rep.n:
        raise ValidationError(f"series has n={series.n}, rep has n={rep.n}")
    if not 0.0 <= r <= 1.0:
        raise ValidationError(f"radius must lie in [0, 1], got {r}")
    d = series.coeff_dim
    rep.check_dense(d)
    if series.degree > rep.L:
        warnings.warn(
            f"series degree {series.degree} exceeds truncation level {rep.L}; "
            "higher terms vanish on the section",
            stacklevel=2,
        )
    dim = rep.dim
    m4 = np.zeros((dim, d, dim, d), dtype=complex)
    harmonic = series.kind == "harmonic"
    for w, a in series.terms.items():
        k = len(w)
        if k > rep.L:
            continue
        if k == 0:
            idx = np.arange(dim)
            m4[idx, :, idx, :] += a
            continue
        rows, cols = _word_triplets(rep, w)
        c = r**k * a
        m4[rows, :, cols, :] += c
        if harmonic:
            m4[cols, :, rows, :] += c.conj().T
    return m4.reshape(dim * d, dim * d)


def sparse_assemble(series: CoeffSeries, rep: FockRep, r: float = 1.0) -> sp.csr_matrix:
    """Sparse counterpart of ``assemble``; no dense-size cap applies."""
    if series.n != rep.n:
        raise ValidationError(f"series has n={series.n}, rep has n={rep.n}")
    if not 0.0 <= r <= 1.0:
        raise ValidationError(f"radius must lie in [0, 1], got {r}")
    d = series.coeff_dim
    size = rep.dim * d
    out = sp.csr_matrix((size, size), dtype=complex)
    for w, a in series.terms.items():
        k = len(w)
        if k > rep.L:
            continue
        shift = sp.identity(rep.dim, format="csr") if k == 0 else sparse_word_operator(rep, w)
        term = sp.kron(shift, sp.csr_matrix(r**k * a), format="csr")
        out = out + term
        if series.kind == "harmonic" and k > 0:
            out = out + term.conj().T
    return out.tocsr()


def graded_row_norm(series: CoeffSeries, k: int) -> float:
    """Norm of sum_{|alpha|=k} S_alpha (x) A_alpha, i.e. ||sum A^* A||^{1/2}."""
    if k < 0:
        raise ValidationError("degree must be nonnegative")
    if series.is_scalar:
        c = series.scalar_slice(k)
        return float(np.sqrt(np.sum(np.abs(c) ** 2)))
    g = series.gram(k)
    return float(np.sqrt(max(np.linalg.eigvalsh((g + g.conj().T) / 2)[-1], 0.0)))


# -- symmetric Fock space -----------------------------------------------------


def symmetric_basis(rep: FockRep) -> tuple[np.ndarray, list[MultiIndex]]:
    """Isometry V whose columns are the normalized Lambda_p indicator vectors, |p| <= L."""
    cols, labels = [], []
    for k in range(rep.L + 1):
        for p in W.multi_indices(rep.n, k):
            v = np.zeros(rep.dim)
            fiber = W.lambda_set(p)
            v[[W.rank(w) for w in fiber]] = 1.0 / np.sqrt(len(fiber))
            cols.append(v)
            labels.append(p)
    return np.column_stack(cols), labels


def symmetric_compress(rep: FockRep, X: np.ndarray, d: int = 1) -> np.ndarray:
    """P X P restricted to the symmetric subspace (coefficient blocks of size d)."""
    if X.shape != (rep.dim * d, rep.dim * d):
        raise ValidationError(f"operator of shape {X.shape} does not act on n={rep.n}, L={rep.L}, d={d}")
    v, _ = symmetric_basis(rep)
    if d > 1:
        v = np.kron(v, np.eye(d))
    return v.conj().T @ X @ v


# -- Q^*Q expansion -----------------------------------------------------------


def qstar_q(q_terms: Mapping[Word, np.ndarray], n: int, d: int) -> dict[Word, np.ndarray]:
    """Coefficients of Q(S)^* Q(S) written as a harmonic band.

    For Q = sum q_alpha S_alpha, S_alpha^* S_beta is S_{beta/alpha} when alpha is a prefix
    of beta, its adjoint in the mirrored case, and 0 otherwise, so the constant term is
    sum q_alpha^* q_alpha and the coefficient of S_gamma is sum_alpha q_alpha^* q_{alpha gamma}.
    """
    qs = {w if isinstance(w, Word) else Word(tuple(w), n): _as_matrix(a, d) for w, a in q_terms.items()}
    out: dict[Word, np.ndarray] = {}
    for alpha, qa in qs.items():
        for beta, qb in qs.items():
            gamma = W.divide(beta, alpha)
            if gamma is None:
                continue
            out[gamma] = out.get(gamma, 0) + qa.conj().T @ qb
    return dict(sorted(out.items(), key=lambda kv: W.rank(kv[0])))
