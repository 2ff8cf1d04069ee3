"""JSON encodings shared by instance files and reports.

Complex numbers are ``{"re": x, "im": y}``; matrices are row-major nested lists of those.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Mapping

import numpy as np

from .errors import ValidationError
from .fock import CoeffSeries
from .words import MultiIndex, Word


def complex_to_json(z: complex) -> dict:
    z = complex(z)
    return {"re": float(z.real), "im": float(z.imag)}


def complex_from_json(obj: Any) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    try:
        return complex(float(obj["re"]), float(obj["im"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed complex number {obj!r}") from exc


def matrix_to_json(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex)
    return [[complex_to_json(x) for x in row] for row in a]


def matrix_from_json(obj: Any, d: int | None = None) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(row, list) for row in obj):
        raise ValidationError("matrix must be a non-empty list of rows")
    rows = [[complex_from_json(x) for x in row] for row in obj]
    if any(len(row) != len(rows) for row in rows):
        raise ValidationError("matrix must be square")
    a = np.array(rows, dtype=complex)
    if d is not None and a.shape != (d, d):
        raise ValidationError(f"matrix has shape {a.shape}, expected ({d}, {d})")
    return a


def word_terms_to_json(terms: Mapping[Word, np.ndarray]) -> list:
    return [{"word": w.to_json(), "coeff": matrix_to_json(a)} for w, a in terms.items()]


def word_terms_from_json(obj: Any, n: int, d: int) -> dict[Word, np.ndarray]:
    if not isinstance(obj, list):
        raise ValidationError("terms must be a list")
    out: dict[Word, np.ndarray] = {}
    for item in obj:
        try:
            w = Word.from_json(item["word"], n)
            a = matrix_from_json(item["coeff"], d)
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed term {item!r}") from exc
        if w in out:
            raise ValidationError(f"duplicate word {w}")
        out[w] = a
    return out


def exponent_terms_to_json(terms: Mapping[MultiIndex, np.ndarray]) -> list:
    return [{"exponents": p.to_json(), "coeff": matrix_to_json(a)} for p, a in terms.items()]


def exponent_terms_from_json(obj: Any, n: int, d: int) -> dict[MultiIndex, np.ndarray]:
    if not isinstance(obj, list):
        raise ValidationError("terms must be a list")
    out: dict[MultiIndex, np.ndarray] = {}
    for item in obj:
        try:
            p = MultiIndex(tuple(item["exponents"]))
            a = matrix_from_json(item["coeff"], d)
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed term {item!r}") from exc
        if p.n != n:
            raise ValidationError(f"exponent vector {p.exponents} has length != n={n}")
        if p in out:
            raise ValidationError(f"duplicate exponent vector {p.exponents}")
        out[p] = a
    return out


def series_to_json(series: CoeffSeries) -> dict:
    return {
        "n": series.n,
        "kind": series.kind,
        "coeff_dim": series.coeff_dim,
        "terms": word_terms_to_json(series.terms),
    }


def series_from_json(obj: Mapping) -> CoeffSeries:
    try:
        n, d = int(obj["n"]), int(obj["coeff_dim"])
        return CoeffSeries(n, obj["kind"], d, word_terms_from_json(obj["terms"], n, d))
    except KeyError as exc:
        raise ValidationError(f"missing field {exc}") from exc


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj: Any) -> str:
    """sha256 of the canonical JSON encoding."""
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()
