"""Bohr radii t_m, gamma_m and the piecewise bound functions M, K, N.

t_m and gamma_m are the roots in (0, 1] of f_m(t) = 1/2 and f_m(t) = 1 where

    f_m(t) = sum_{k=1}^{m-1} t^k cos(pi / (floor((m-1)/k) + 2)).

f_m is a polynomial with positive coefficients, so it is strictly increasing on [0, 1]
and plain bisection gives a certified bracket for each root.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import ValidationError

DEFAULT_TOL = 1e-12
_MAX_BISECTIONS = 200
# printed tables round to well below any supported tolerance
TABLE_DECIMALS = 15


@lru_cache(maxsize=1024)
def cos_weights(m: int) -> tuple[float, ...]:
    """cos(pi / (floor((m-1)/k) + 2)) for k = 1..m-1."""
    if m < 2:
        raise ValidationError(f"m must be >= 2, got {m}")
    return tuple(math.cos(math.pi / ((m - 1) // k + 2)) for k in range(1, m))


def cos_factor(m: int, k: int) -> float:
    """The Fejer factor cos(pi / (floor((m-1)/k) + 2)) for 1 <= k <= m-1."""
    if not 1 <= k <= m - 1:
        raise ValidationError(f"need 1 <= k <= m-1, got k={k}, m={m}")
    return cos_weights(m)[k - 1]


def f_m(m: int, t: float) -> float:
    if not 0.0 <= t <= 1.0:
        raise ValidationError(f"t must lie in [0, 1], got {t}")
    weights = cos_weights(m)
    # fsum in ascending k keeps the sum correctly rounded
    terms = []
    power = 1.0
    for c in weights:
        power *= t
        terms.append(power * c)
    return math.fsum(terms)


@dataclass(frozen=True)
class RootResult:
    value: float
    residual: float
    width: float
    clamped: bool = False


def _bisect(m: int, target: float, lo: float, hi: float, tol: float) -> RootResult:
    flo, fhi = f_m(m, lo) - target, f_m(m, hi) - target
    if fhi == 0.0:
        return RootResult(hi, 0.0, 0.0)
    if flo == 0.0:
        return RootResult(lo, 0.0, 0.0)
    if not flo < 0.0 < fhi:
        raise ValidationError(f"no sign change of f_{m} - {target} on [{lo}, {hi}]")
    # bisect until the bracket stops shrinking; tol only bounds the accepted final width
    for _ in range(_MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fmid = f_m(m, mid) - target
        if fmid == 0.0:
            return RootResult(mid, 0.0, 0.0)
        if fmid < 0.0:
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    if hi - lo > tol:
        raise ValidationError(f"bisection for f_{m} = {target} did not reach width {tol}")
    value, res = (lo, flo) if abs(flo) <= abs(fhi) else (hi, fhi)
    return RootResult(value, res, hi - lo)


def solve_t_result(m: int, tol: float = DEFAULT_TOL) -> RootResult:
    if tol <= 0:
        raise ValidationError("tol must be positive")
    # f_m(1/3) < 1/2 because f_m(t) < t/(1-t); f_m(1) >= cos(pi/3) = 1/2
    return _bisect(m, 0.5, 1.0 / 3.0, 1.0, tol)


def solve_t(m: int, tol: float = DEFAULT_TOL) -> float:
    """Root of f_m(t) = 1/2 in (1/3, 1]."""
    return solve_t_result(m, tol).value


def solve_gamma_result(m: int, tol: float = DEFAULT_TOL) -> RootResult:
    if tol <= 0:
        raise ValidationError("tol must be positive")
    if m < 2:
        raise ValidationError(f"m must be >= 2, got {m}")
    if m == 2:
        # f_2(1) = 1/2 < 1: no root in (0, 1]; the radius bound is clamped to 1
        return RootResult(1.0, f_m(2, 1.0) - 1.0, 0.0, clamped=True)
    return _bisect(m, 1.0, 0.5, 1.0, tol)


def solve_gamma(m: int, tol: float = DEFAULT_TOL) -> float:
    """Root of f_m(t) = 1 in (1/2, 1] for m >= 3; 1.0 for m = 2."""
    return solve_gamma_result(m, tol).value


def radius(kind: str, m: int | None, tol: float = DEFAULT_TOL) -> float:
    """t_m or gamma_m; ``m=None`` means the m = infinity limits 1/3 and 1/2."""
    if kind == "t":
        return 1.0 / 3.0 if m is None else solve_t(m, tol)
    if kind == "gamma":
        return 0.5 if m is None else solve_gamma(m, tol)
    raise ValidationError(f"unknown radius kind {kind!r}")


# -- tables -------------------------------------------------------------------


@dataclass
class RadiusTable:
    kind: str
    tol: float
    entries: dict[int, RootResult] = field(default_factory=dict)

    @classmethod
    def build(cls, kind: str, m_max: int, tol: float = DEFAULT_TOL, m_min: int = 2) -> "RadiusTable":
        if kind not in ("t", "gamma"):
            raise ValidationError(f"unknown radius kind {kind!r}")
        if m_min < 2 or m_max < m_min:
            raise ValidationError(f"need 2 <= m_min <= m_max, got {m_min}, {m_max}")
        solver = solve_t_result if kind == "t" else solve_gamma_result
        return cls(kind, tol, {m: solver(m, tol) for m in range(m_min, m_max + 1)})

    def values(self) -> list[float]:
        return [e.value for e in self.entries.values()]

    def is_strictly_decreasing(self, start: int | None = None) -> bool:
        ms = [m for m in self.entries if start is None or m >= start]
        vals = [self.entries[m].value for m in ms]
        return all(b < a for a, b in zip(vals, vals[1:]))

    def rows(self) -> list[dict]:
        return [
            {"m": m, "value": round(e.value, TABLE_DECIMALS), "residual": e.residual, "width": e.width, "clamped": e.clamped}
            for m, e in self.entries.items()
        ]

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, "tol": self.tol, "entries": self.rows()}, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["m", "value", "residual", "clamped"], lineterminator="\n")
        writer.writeheader()
        for row in self.rows():
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items() if k != "width"})
        return buf.getvalue()


# -- piecewise bounds ---------------------------------------------------------


def _check_r(r: float) -> None:
    if not 0.0 <= r < 1.0:
        raise ValidationError(f"r must lie in [0, 1), got {r}")


def bound_M(r: float) -> float:
    """1 + r^2/(1-r)^2 on [0, 1/2], 2r/(1-r) beyond."""
    _check_r(r)
    if r <= 0.5:
        return 1.0 + r * r / (1.0 - r) ** 2
    return 2.0 * r / (1.0 - r)


def bound_K(r: float) -> float:
    """1 on [0, 1/5], 4r/(1-r) beyond."""
    _check_r(r)
    if r <= 0.2:
        return 1.0
    return 4.0 * r / (1.0 - r)


def bound_N(r: float) -> float:
    """1 on [0, 1/2], r/(1-r) beyond."""
    _check_r(r)
    if r <= 0.5:
        return 1.0
    return r / (1.0 - r)


__all__ = [
    "RadiusTable",
    "RootResult",
    "bound_K",
    "bound_M",
    "bound_N",
    "cos_factor",
    "cos_weights",
    "f_m",
    "radius",
    "solve_gamma",
    "solve_t",
]
