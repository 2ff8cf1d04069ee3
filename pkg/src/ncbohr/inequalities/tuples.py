"""Random operator tuples in a row ball and the Bohr sums evaluated on them."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .. import words as W
from ..errors import ValidationError
from ..fock import CoeffSeries
from ..spectra import op_norm, row_norm
from ..words import MultiIndex, Word

COMMUTE_TOL = 1e-10


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def random_row_tuple(n: int, size: int, radius: float, rng: np.random.Generator) -> list[np.ndarray]:
    """n matrices with ||sum T_i T_i^*||^{1/2} = radius."""
    ts = [complex_gaussian(rng, (size, size)) for _ in range(n)]
    s = row_norm(ts)
    return [radius * t / s for t in ts]


def random_scalar_point(n: int, radius: float, rng: np.random.Generator, nonnegative: bool = False) -> np.ndarray:
    """A point of C^n (or R_+^n) with Euclidean norm ``radius``."""
    z = np.abs(rng.standard_normal(n)) if nonnegative else complex_gaussian(rng, n)
    return radius * z / np.linalg.norm(z)


def random_commuting_tuple(n: int, size: int, radius: float, rng: np.random.Generator) -> list[np.ndarray]:
    """Commuting matrices V D_i V^{-1} (V well conditioned) scaled to row norm ``radius``."""
    q, _ = np.linalg.qr(complex_gaussian(rng, (size, size)))
    v = q @ np.diag(1.0 + 0.5 * rng.random(size))
    vinv = np.linalg.inv(v)
    ts = [v @ np.diag(complex_gaussian(rng, size)) @ vinv for _ in range(n)]
    s = row_norm(ts)
    return [radius * t / s for t in ts]


def check_commuting(ts: Sequence[np.ndarray], tol: float = COMMUTE_TOL) -> None:
    scale = max(1.0, max(op_norm(t) for t in ts) ** 2)
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            if op_norm(ts[i] @ ts[j] - ts[j] @ ts[i]) > tol * scale:
                raise ValidationError(f"tuple entries {i + 1} and {j + 1} do not commute")


def word_products(ts: Sequence[np.ndarray], max_len: int) -> dict[Word, np.ndarray]:
    """T_alpha = T_{i1} T_{i2} ... T_{ik} for every word of length <= max_len."""
    n, size = len(ts), ts[0].shape[0]
    out = {W.identity(n): np.eye(size, dtype=complex)}
    frontier = [W.identity(n)]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            base = out[w]
            for i in range(1, n + 1):
                v = Word(w.letters + (i,), n)
                out[v] = base @ ts[i - 1]
                nxt.append(v)
        frontier = nxt
    return out


def monomials(ts: Sequence[np.ndarray], exponents: MultiIndex) -> np.ndarray:
    """T^p = T_1^{p_1} ... T_n^{p_n}."""
    size = ts[0].shape[0]
    out = np.eye(size, dtype=complex)
    for t, e in zip(ts, exponents.exponents):
        out = out @ np.linalg.matrix_power(t, e)
    return out


def bohr_tuple_sum(series: CoeffSeries, ts: Sequence[np.ndarray], absolute: bool = True) -> float:
    """sum_k ||sum_{|alpha|=k} T_alpha (x) A_alpha||, with |a_alpha| for scalar series."""
    if len(ts) != series.n:
        raise ValidationError(f"tuple has {len(ts)} entries, series has n={series.n}")
    prods = word_products(ts, series.degree)
    total = []
    for k in range(series.degree + 1):
        acc = None
        for w, a in series.slice(k):
            coeff = np.abs(a) if (absolute and series.is_scalar) else a
            term = np.kron(prods[w], coeff)
            acc = term if acc is None else acc + term
        if acc is not None:
            total.append(op_norm(acc))
    return math.fsum(total)


def scalar_point_sum(series: CoeffSeries, z: np.ndarray) -> float:
    """sum_k |sum_{|alpha|=k} |a_alpha| z_alpha| for a scalar series and z in C^n."""
    total = []
    for k in range(series.degree + 1):
        s = 0j
        for w, a in series.slice(k):
            s += abs(a[0, 0]) * np.prod([z[i - 1] for i in w.letters])
        total.append(abs(s))
    return math.fsum(total)

