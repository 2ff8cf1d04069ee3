"""Eigenvalue-based verdicts: positivity, numerical radii and row norms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ValidationError
from .fock import FockRep, max_dense_dim, sparse_word_operator
from . import words as W

PSD_TOL = 1e-9
SPARSE_MIN_DIM = 256
THETA_GRID = 720
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2


def _square(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    return a


def lambda_max(h: np.ndarray) -> float:
    h = hermitian_part(_square(h))
    if h.shape[0] == 0:
        return 0.0
    if h.shape[0] > 64:
        return float(sla.eigh(h, eigvals_only=True, subset_by_index=[h.shape[0] - 1, h.shape[0] - 1])[0])
    return float(np.linalg.eigvalsh(h)[-1])


def lambda_min(h: np.ndarray) -> float:
    h = hermitian_part(_square(h))
    if h.shape[0] == 0:
        return 0.0
    if h.shape[0] > 64:
        return float(sla.eigh(h, eigvals_only=True, subset_by_index=[0, 0])[0])
    return float(np.linalg.eigvalsh(h)[0])


def op_norm(a: np.ndarray) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def psd_sqrt(h: np.ndarray) -> np.ndarray:
    """Square root of a positive matrix (negative rounding noise clipped)."""
    w, v = np.linalg.eigh(hermitian_part(_square(h)))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


@dataclass(frozen=True)
class PsdVerdict:
    min_eigenvalue: float
    tol: float
    verdict: str
    matrix_size: int
    scale: float = 1.0

    @property
    def is_psd(self) -> bool:
        return self.verdict == "PSD"

    @property
    def threshold(self) -> float:
        return self.tol * self.scale


def psd_scale(h: np.ndarray) -> float:
    if h.size == 0:
        return 1.0
    return max(1.0, float(np.abs(h).sum(axis=1).max()))


def psd_check(h: np.ndarray, tol: float = PSD_TOL) -> PsdVerdict:
    """PSD iff the smallest eigenvalue is >= -tol * max(1, max row sum)."""
    h = _square(np.asarray(h))
    scale = psd_scale(h)
    lam = lambda_min(h)
    verdict = "PSD" if lam >= -tol * scale else "NotPSD"
    return PsdVerdict(lam, tol, verdict, h.shape[0], scale)


@dataclass(frozen=True)
class RadiusEstimate:
    value: float
    kind: str
    level: int | None = None
    stabilized: bool = False


def _is_normal(t: np.ndarray) -> bool:
    c = t @ t.conj().T - t.conj().T @ t
    return op_norm(c) <= 1e-12 * max(1.0, op_norm(t)) ** 2


def _profile(t: np.ndarray, theta: float) -> float:
    return lambda_max(hermitian_part(np.exp(1j * theta) * t))


def golden_max(fn, lo: float, hi: float, tol: float = 1e-10) -> tuple[float, float]:
    """Golden-section search for a maximum of ``fn`` on [lo, hi]; returns (argmax, max)."""
    x1, x2 = hi - _GOLDEN * (hi - lo), lo + _GOLDEN * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = fn(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = fn(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def numerical_radius(t: np.ndarray, tol: float = 1e-10, grid: int = THETA_GRID) -> RadiusEstimate:
    """omega(T) = max_theta lambda_max(Re(e^{i theta} T)).

    Normal matrices use the spectral radius.  Otherwise a uniform theta grid is scanned
    and the best cell is refined by golden-section search.
    """
    t = _square(np.asarray(t, dtype=complex))
    if t.shape[0] == 0:
        return RadiusEstimate(0.0, "numerical", stabilized=True)
    if _is_normal(t):
        return RadiusEstimate(float(np.max(np.abs(np.linalg.eigvals(t)))), "numerical", stabilized=True)
    thetas = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    vals = np.array([_profile(t, th) for th in thetas])
    best = int(np.argmax(vals))
    h = 2 * np.pi / grid
    _, refined = golden_max(lambda th: _profile(t, th), thetas[best] - h, thetas[best] + h, tol)
    value = max(float(vals[best]), refined)
    return RadiusEstimate(value, "numerical", stabilized=True)


def sparse_lambda_max(h) -> float:
    """Largest eigenvalue of a Hermitian matrix given densely or as a scipy sparse matrix.

    Large sparse inputs use Lanczos iteration with a fixed start vector (deterministic).
    """
    if not sp.issparse(h):
        return lambda_max(h)
    if h.shape[0] <= SPARSE_MIN_DIM:
        return lambda_max(h.toarray())
    h = h.tocsr()
    h.eliminate_zeros()
    if h.nnz == 0:
        return 0.0
    # a generic fixed start vector; the all-ones vector can lie in the kernel of structured inputs
    v0 = np.random.default_rng(0).standard_normal(h.shape[0]).astype(h.dtype)
    val = spla.eigsh(h, k=1, which="LA", v0=v0, tol=0.0, return_eigenvectors=False, maxiter=100 * h.shape[0])
    return float(val[0])


def graded_numerical_radius(t) -> float:
    """omega(T) for an operator whose numerical range is rotation invariant.

    Covers T = sum_i S_i (x) X_i and every operator that maps degree k into degree k+1:
    Conjugating by diag(e^{i k phi}) on the degree-k block multiplies such an operator
    by e^{i phi}, so its numerical range is a disc and omega(T) = lambda_max(Re T).
    """
    if sp.issparse(t):
        return max(sparse_lambda_max((t + t.conj().T) / 2), 0.0)
    return max(lambda_max(hermitian_part(_square(t))), 0.0)


def _check_tuple(xs: Sequence[np.ndarray]) -> list[np.ndarray]:
    if len(xs) == 0:
        raise ValidationError("empty operator tuple")
    mats = [np.asarray(x, dtype=complex) for x in xs]
    mats = [m.reshape(1, 1) if m.ndim == 0 else m for m in mats]
    shape = mats[0].shape
    for m in mats:
        if m.shape != shape or m.ndim != 2 or shape[0] != shape[1]:
            raise ValidationError("operator tuple entries must be square and of equal size")
    return mats


def joint_operator(xs: Sequence[np.ndarray], L: int) -> sp.csr_matrix:
    """sum_i S_i (x) X_i^* on the level-L truncation of F^2(H_N), N = len(xs), as a sparse matrix."""
    mats = _check_tuple(xs)
    n, d = len(mats), mats[0].shape[0]
    rep = FockRep(n, L)
    rep.check_dense(d)
    out = sp.csr_matrix((rep.dim * d, rep.dim * d), dtype=complex)
    for i, x in enumerate(mats, start=1):
        out = out + sp.kron(sparse_word_operator(rep, W.generator(n, i)), sp.csr_matrix(x.conj().T), format="csr")
    return out


def joint_numerical_radius(xs: Sequence[np.ndarray], L: int, tol: float = 1e-6) -> RadiusEstimate:
    """w_L(X) = omega(sum S_i (x) X_i^*) on the level-L truncation.

    w_L is nondecreasing in L and bounded by the row norm; ``stabilized`` records whether
    |w_L - w_{L-1}| < tol.
    """
    if L < 1:
        raise ValidationError("joint numerical radius needs level >= 1")
    w_prev = graded_numerical_radius(joint_operator(xs, L - 1)) if L > 1 else 0.5 * row_norm(xs)
    w = graded_numerical_radius(joint_operator(xs, L))
    return RadiusEstimate(w, "joint", level=L, stabilized=abs(w - w_prev) < tol)


def max_joint_level(n: int, d: int) -> int:
    cap = max_dense_dim()
    L = 1
    while W.basis_size(n, L + 1) * d <= cap:
        L += 1
    return L


def stabilized_joint_radius(
    xs: Sequence[np.ndarray], tol: float = 1e-6, max_level: int | None = None
) -> RadiusEstimate:
    """Raise the level until successive values differ by < tol or the size cap is hit."""
    mats = _check_tuple(xs)
    top = max_joint_level(len(mats), mats[0].shape[0])
    if max_level is not None:
        top = min(top, max_level)
    prev = 0.5 * row_norm(mats)  # exact value at level 1
    w, L = prev, 1
    for L in range(2, top + 1):
        w = graded_numerical_radius(joint_operator(mats, L))
        if abs(w - prev) < tol:
            return RadiusEstimate(w, "joint", level=L, stabilized=True)
        prev = w
    return RadiusEstimate(w, "joint", level=L, stabilized=False)


def euclidean_joint_radius(
    xs: Sequence[np.ndarray], restarts: int = 64, tol: float = 1e-12, seed: int = 0, max_iter: int = 500
) -> RadiusEstimate:
    """Lower bound for w_e(X) = sup_{|h|=1} (sum |<X_i h, h>|^2)^{1/2}.

    Each restart iterates h <- top eigenvector of Re(sum conj(c_i) X_i), c_i = <X_i h, h>;
    since |z|^2 >= 2 Re(conj(w) z) - |w|^2 every step is an ascent step.
    """
    if restarts < 1:
        raise ValidationError("restarts must be >= 1")
    mats = _check_tuple(xs)
    d = mats[0].shape[0]
    rng = np.random.default_rng(seed)
    best = 0.0
    starts = [np.linalg.eigh(hermitian_part(x))[1][:, -1] for x in mats[:1]]
    starts += [rng.standard_normal(d) + 1j * rng.standard_normal(d) for _ in range(restarts)]
    for h in starts:
        h = h / np.linalg.norm(h)
        val = 0.0
        for _ in range(max_iter):
            c = np.array([np.vdot(h, x @ h) for x in mats])
            val = float(np.sum(np.abs(c) ** 2))
            m = hermitian_part(sum(np.conj(ci) * x for ci, x in zip(c, mats)))
            h_new = np.linalg.eigh(m)[1][:, -1]
            c_new = np.array([np.vdot(h_new, x @ h_new) for x in mats])
            val_new = float(np.sum(np.abs(c_new) ** 2))
            if val_new <= val + tol:
                break
            h = h_new
        best = max(best, math.sqrt(max(val, 0.0)))
    return RadiusEstimate(best, "euclidean_joint", stabilized=False)


def row_norm(xs: Sequence[np.ndarray]) -> float:
    """||[X_1, ..., X_n]|| = ||sum X_i X_i^*||^{1/2}."""
    mats = _check_tuple(xs)
    g = sum(x @ x.conj().T for x in mats)
    return math.sqrt(max(lambda_max(g), 0.0))


def column_norm(xs: Sequence[np.ndarray]) -> float:
    """||sum X_i^* X_i||^{1/2}."""
    return row_norm([np.asarray(x).conj().T for x in _check_tuple(xs)])


def joint_radius_estimate(xs: Sequence[np.ndarray], tol: float = 1e-6, max_level: int | None = None) -> RadiusEstimate:
    """w(X) for use inside inequality checks.

    A tuple of scalars has w = its Euclidean norm exactly (sum conj(x_i) S_i is a multiple
    of a pure isometry, whose numerical range is the open disc), and a single matrix has
    w = omega(X).  Otherwise the level is
    raised up to the size cap; the result is then a lower bound for w.
    """
    mats = _check_tuple(xs)
    if mats[0].shape == (1, 1):
        value = math.sqrt(math.fsum(abs(complex(m[0, 0])) ** 2 for m in mats))
        return RadiusEstimate(value, "joint", level=None, stabilized=True)
    if len(mats) == 1:
        # Re(S (x) X^*) is block Toeplitz with symbol Re(e^{i theta} X^*), so w = omega(X)
        return RadiusEstimate(numerical_radius(mats[0]).value, "joint", level=None, stabilized=True)
    return stabilized_joint_radius(mats, tol=tol, max_level=max_level)
