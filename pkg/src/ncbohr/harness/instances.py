"""Instance files: JSON encodings of series, pairs and trig pairs with their certificates.

Loading validates everything: coefficients must parse into a series and an attached
certificate must reproduce the stored terms, otherwise CertificateError is raised.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from ..errors import ValidationError
from ..fock import KINDS, CoeffSeries
from ..inequalities.bohr import trig_dominance_check
from ..inequalities.hypotheses import Certificate, validate_certificate
from ..serialize import (
    complex_from_json,
    complex_to_json,
    exponent_terms_from_json,
    exponent_terms_to_json,
    word_terms_from_json,
    word_terms_to_json,
)
from ..symcalc import SymSeries, free_lift
from . import generators as G

SCHEMA_VERSION = 1
SERIES_KINDS = KINDS + ("sym",)
GENERATE_KINDS = ("qq", "holo", "pair", "sym", "contractive", "contraction", "trig")


def _require(obj: Mapping, key: str) -> Any:
    try:
        return obj[key]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"missing field {key!r}") from exc


def _check_schema(obj: Any) -> None:
    if not isinstance(obj, Mapping):
        raise ValidationError("instance must be a JSON object")
    version = obj.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValidationError(f"unsupported schema_version {version!r}")


def certificate_to_json(cert: Certificate) -> dict:
    return {
        "relation": cert.relation,
        "q_terms": word_terms_to_json(cert.q_terms),
        "scale": float(cert.scale),
        "meta": dict(cert.meta),
    }


def certificate_from_json(obj: Mapping, n: int, d: int) -> Certificate:
    return Certificate(
        str(_require(obj, "relation")),
        word_terms_from_json(_require(obj, "q_terms"), n, d),
        float(obj.get("scale", 1.0)),
        dict(obj.get("meta", {})),
    )


@dataclass
class InstanceFile:
    """One series (free or symmetric) plus an optional certificate and provenance."""

    n: int
    kind: str
    coeff_dim: int
    terms: dict
    band: int | None = None
    certificate: Certificate | None = None
    provenance: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in SERIES_KINDS:
            raise ValidationError(f"unknown instance kind {self.kind!r}")
        self.series()

    @classmethod
    def from_series(
        cls, series: CoeffSeries | SymSeries, certificate: Certificate | None = None, provenance: Mapping | None = None
    ) -> "InstanceFile":
        if isinstance(series, SymSeries):
            return cls(series.n, "sym", series.coeff_dim, dict(series.terms), series.band, certificate, dict(provenance or {}))
        return cls(series.n, series.kind, series.coeff_dim, dict(series.terms), None, certificate, dict(provenance or {}))

    def series(self) -> CoeffSeries | SymSeries:
        if self.kind == "sym":
            return SymSeries(self.n, self.coeff_dim, self.terms, self.band)
        return CoeffSeries(self.n, self.kind, self.coeff_dim, self.terms)

    @property
    def degree(self) -> int:
        return self.series().degree

    def validate(self) -> None:
        """Raise CertificateError unless the certificate reproduces the terms."""
        if self.certificate is None:
            return
        s = self.series()
        validate_certificate(free_lift(s) if isinstance(s, SymSeries) else s, self.certificate)

    def to_json(self) -> dict:
        sym = self.kind == "sym"
        return {
            "schema_version": SCHEMA_VERSION,
            "n": self.n,
            "kind": self.kind,
            "coeff_dim": self.coeff_dim,
            "band": self.band,
            "terms": exponent_terms_to_json(self.series().terms) if sym else word_terms_to_json(self.series().terms),
            "certificate": None if self.certificate is None else certificate_to_json(self.certificate),
            "provenance": dict(self.provenance),
        }

    @classmethod
    def from_json(cls, obj: Mapping, validate: bool = True) -> "InstanceFile":
        _check_schema(obj)
        n, d, kind = int(_require(obj, "n")), int(_require(obj, "coeff_dim")), str(_require(obj, "kind"))
        if kind == "sym":
            terms = exponent_terms_from_json(_require(obj, "terms"), n, d)
        else:
            terms = word_terms_from_json(_require(obj, "terms"), n, d)
        cert = obj.get("certificate")
        band = obj.get("band")
        inst = cls(
            n,
            kind,
            d,
            terms,
            None if band is None else int(band),
            None if cert is None else certificate_from_json(cert, n, d),
            dict(obj.get("provenance") or {}),
        )
        if validate:
            inst.validate()
        return inst


@dataclass
class PairFile:
    """Harmonic pair with H_lower <= H_upper; the certificate gives H_upper - H_lower = Q^*Q."""

    lower: InstanceFile
    upper: InstanceFile
    certificate: Certificate | None = None
    provenance: dict = field(default_factory=dict)

    kind = "dominated_pair"

    def __post_init__(self) -> None:
        for side in (self.lower, self.upper):
            if side.kind != "harmonic":
                raise ValidationError("pair members must be harmonic series")
        if (self.lower.n, self.lower.coeff_dim) != (self.upper.n, self.upper.coeff_dim):
            raise ValidationError("pair members must share n and coeff_dim")

    def validate(self) -> None:
        if self.certificate is not None:
            validate_certificate(self.upper.series(), self.certificate, lower=self.lower.series())

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "lower": self.lower.to_json(),
            "upper": self.upper.to_json(),
            "certificate": None if self.certificate is None else certificate_to_json(self.certificate),
            "provenance": dict(self.provenance),
        }

    @classmethod
    def from_json(cls, obj: Mapping, validate: bool = True) -> "PairFile":
        _check_schema(obj)
        lower = InstanceFile.from_json(_require(obj, "lower"), validate=False)
        upper = InstanceFile.from_json(_require(obj, "upper"), validate=False)
        cert = obj.get("certificate")
        pair = cls(
            lower,
            upper,
            None if cert is None else certificate_from_json(cert, lower.n, lower.coeff_dim),
            dict(obj.get("provenance") or {}),
        )
        if validate:
            pair.validate()
        return pair


def _vector_to_json(v: np.ndarray) -> list:
    return [complex_to_json(z) for z in v]


@dataclass
class TrigPairFile:
    """One-sided coefficients of real trig polynomials f <= g, optionally with h, g - f = |h|^2."""

    f: np.ndarray
    g: np.ndarray
    h: np.ndarray | None = None
    provenance: dict = field(default_factory=dict)

    kind = "trig_pair"

    def __post_init__(self) -> None:
        self.f = np.asarray(self.f, dtype=complex)
        self.g = np.asarray(self.g, dtype=complex)
        if self.f.ndim != 1 or self.g.ndim != 1 or not len(self.f) or not len(self.g):
            raise ValidationError("trig coefficients must be non-empty vectors")
        if self.h is not None:
            self.h = np.asarray(self.h, dtype=complex)

    @property
    def m(self) -> int:
        return max(len(self.f), len(self.g), 2)

    def validate(self) -> None:
        if self.h is None:
            return
        trig_dominance_check(self.f, self.g, certificate_h=self.h)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "f": _vector_to_json(self.f),
            "g": _vector_to_json(self.g),
            "h": None if self.h is None else _vector_to_json(self.h),
            "provenance": dict(self.provenance),
        }

    @classmethod
    def from_json(cls, obj: Mapping, validate: bool = True) -> "TrigPairFile":
        _check_schema(obj)

        def vec(key):
            raw = _require(obj, key)
            if not isinstance(raw, list):
                raise ValidationError(f"{key} must be a list")
            return np.array([complex_from_json(z) for z in raw], dtype=complex)

        h = obj.get("h")
        out = cls(vec("f"), vec("g"), None if h is None else vec("h"), dict(obj.get("provenance") or {}))
        if validate:
            out.validate()
        return out


AnyInstance = InstanceFile | PairFile | TrigPairFile


def from_json(obj: Any, validate: bool = True) -> AnyInstance:
    _check_schema(obj)
    kind = obj.get("kind")
    if kind == PairFile.kind:
        return PairFile.from_json(obj, validate)
    if kind == TrigPairFile.kind:
        return TrigPairFile.from_json(obj, validate)
    return InstanceFile.from_json(obj, validate)


def dumps(inst: AnyInstance) -> str:
    """Deterministic encoding: sorted keys, two-space indent, trailing newline."""
    return json.dumps(inst.to_json(), indent=2, sort_keys=True) + "\n"


def loads(text: str, validate: bool = True) -> AnyInstance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    return from_json(obj, validate)


def save(inst: AnyInstance, path: str | Path) -> None:
    Path(path).write_text(dumps(inst), encoding="utf-8")


def load(path: str | Path, validate: bool = True) -> AnyInstance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    return loads(text, validate)


def generate(kind: str, n: int, degree: int, seed: int, d: int = 1, margin: float = 0.1) -> AnyInstance:
    """Run one generator and wrap its output with provenance."""
    prov = {"seed": seed, "generator": kind, "margin": margin, "degree": degree}
    if kind == "qq":
        s, cert = G.generate_qq_positive(n, degree, seed, d)
        return InstanceFile.from_series(s, cert, prov)
    if kind == "holo":
        s, cert = G.generate_re_leq_I(n, degree, seed, d, margin)
        return InstanceFile.from_series(s, cert, prov)
    if kind == "pair":
        lower, upper, cert = G.generate_dominated_pair(n, degree, seed, d)
        return PairFile(InstanceFile.from_series(lower), InstanceFile.from_series(upper), cert, prov)
    if kind == "sym":
        s, cert = G.generate_sym(n, degree, seed, d, margin)
        return InstanceFile.from_series(s, cert, prov)
    if kind == "contractive":
        return InstanceFile.from_series(G.generate_contractive(n, degree, seed, d), None, prov)
    if kind == "contraction":
        if d != 1:
            raise ValidationError("harmonic contractions are scalar (dim 1)")
        s, cert = G.generate_harmonic_contraction(n, degree, seed)
        return InstanceFile.from_series(s, cert, prov)
    if kind == "trig":
        f, g, h = G.generate_trig_pair(degree + 1, seed)
        return TrigPairFile(f, g, h, prov)
    raise ValidationError(f"unknown generator kind {kind!r}; expected one of {', '.join(GENERATE_KINDS)}")
