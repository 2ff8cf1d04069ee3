"""Single-variable helpers: trigonometric polynomials and sup norms on the circle."""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from ..errors import ValidationError
from ..spectra import golden_max

THETA_POINTS = 4096
SYMMETRY_TOL = 1e-12


def one_sided(coeffs: Sequence[complex] | Mapping[int, complex]) -> np.ndarray:
    """Coefficients c_0..c_{m-1} of a real trigonometric polynomial sum_{|k|<m} c_k e^{ik theta}.

    Accepts either the nonnegative half (c_0 must be real) or a two-sided mapping
    {k: c_k}, which must satisfy c_{-k} = conj(c_k).
    """
    if isinstance(coeffs, Mapping):
        keys = [int(k) for k in coeffs]
        top = max((abs(k) for k in keys), default=0)
        full = {int(k): complex(v) for k, v in coeffs.items()}
        for k in range(0, top + 1):
            a, b = full.get(k, 0j), full.get(-k, 0j)
            if abs(a - np.conj(b)) > SYMMETRY_TOL * max(1.0, abs(a)):
                raise ValidationError(f"coefficients are not Hermitian-symmetric at k={k}")
        out = np.array([full.get(k, 0j) for k in range(top + 1)], dtype=complex)
    else:
        out = np.asarray(list(coeffs), dtype=complex)
        if out.size == 0:
            raise ValidationError("empty coefficient list")
        if abs(out[0].imag) > SYMMETRY_TOL * max(1.0, abs(out[0])):
            raise ValidationError("constant coefficient of a real function must be real")
    out[0] = out[0].real
    return out


def trig_values(c: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """c_0 + 2 Re sum_{k>=1} c_k e^{ik theta}."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    k = np.arange(1, len(c))
    osc = np.exp(1j * np.outer(theta, k)) @ c[1:] if len(c) > 1 else np.zeros(len(theta))
    return c[0].real + 2 * np.real(osc)


def poly_values(a: Sequence[complex], z: np.ndarray) -> np.ndarray:
    """sum a_k z^k (coefficients in increasing degree)."""
    return np.polynomial.polynomial.polyval(np.asarray(z), np.asarray(a, dtype=complex))


def sup_norm_on_circle(a: Sequence[complex], grid: int = THETA_POINTS, refine: bool = True) -> tuple[float, float]:
    """max |p(e^{i theta})| on a uniform grid, optionally refined by golden section.

    Returns (value, theta).  The value is a lower bound for the sup norm.
    """
    theta = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    vals = np.abs(poly_values(a, np.exp(1j * theta)))
    i = int(np.argmax(vals))
    best, arg = float(vals[i]), float(theta[i])
    if refine:
        h = 2 * np.pi / grid
        x, v = golden_max(lambda t: float(abs(poly_values(a, np.exp(1j * t)))), arg - h, arg + h, 1e-12)
        if v > best:
            best, arg = v, x
    return best, arg
