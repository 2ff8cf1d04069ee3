"""Verdict containers: margins, hypothesis checks and verification reports."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from ..serialize import digest
from ..spectra import lambda_min

SLACK_TOL = 1e-8

CERTIFIED = "CertifiedByConstruction"
SECTION_POSITIVE = "SectionPositiveUpTo"
VIOLATED = "Violated"
HYPOTHESIS_KINDS = ("re_leq_I", "norm_leq_1", "positive", "pointwise_dominance")


@dataclass(frozen=True)
class Margin:
    """One inequality lhs <= rhs; ``slack`` = rhs - lhs (or a smallest eigenvalue)."""

    name: str
    lhs: float
    rhs: float
    slack: float
    tol: float = SLACK_TOL

    @property
    def passed(self) -> bool:
        return self.slack >= -self.tol

    def to_json(self) -> dict:
        return {k: _num(v) for k, v in asdict(self).items()}

    @classmethod
    def from_json(cls, obj: dict) -> "Margin":
        return cls(obj["name"], *(float(obj[k]) for k in ("lhs", "rhs", "slack", "tol")))


def _num(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def scalar_margin(name: str, lhs: float, rhs: float, tol: float = SLACK_TOL) -> Margin:
    lhs, rhs = float(lhs), float(rhs)
    return Margin(name, lhs, rhs, rhs - lhs, tol)


def psd_margin(name: str, verdict) -> Margin:
    """Margin from a PsdVerdict: slack is the smallest eigenvalue, tolerance its threshold."""
    lam = float(verdict.min_eigenvalue)
    return Margin(name, 0.0, lam, lam, float(verdict.threshold))


def operator_margin(name: str, lower: np.ndarray, upper: np.ndarray, tol: float = SLACK_TOL) -> Margin:
    """lower <= upper as selfadjoint operators; slack = lambda_min(upper - lower)."""
    lam = lambda_min(np.asarray(upper) - np.asarray(lower))
    return Margin(name, 0.0, lam, lam, tol)


@dataclass(frozen=True)
class HypothesisCheck:
    kind: str
    verdict: str
    level: int | None = None
    r: float | None = None
    min_eigenvalue: float | None = None
    detail: str = ""

    def __post_init__(self) -> None:
        if self.kind not in HYPOTHESIS_KINDS:
            raise ValueError(f"unknown hypothesis kind {self.kind!r}")
        if self.verdict not in (CERTIFIED, SECTION_POSITIVE, VIOLATED):
            raise ValueError(f"unknown hypothesis verdict {self.verdict!r}")

    @property
    def established(self) -> bool:
        return self.verdict != VIOLATED

    @property
    def label(self) -> str:
        if self.verdict == CERTIFIED:
            return CERTIFIED
        return f"{self.verdict}({self.level})"

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "HypothesisCheck":
        return cls(**obj)


@dataclass
class VerificationReport:
    id: str
    inputs_digest: str
    margins: list[Margin] = field(default_factory=list)
    tolerances: dict[str, float] = field(default_factory=dict)
    levels: dict[str, Any] = field(default_factory=dict)
    notices: list[str] = field(default_factory=list)
    hypothesis: HypothesisCheck | None = None

    def add(self, margin: Margin) -> Margin:
        self.margins.append(margin)
        return margin

    def extend(self, margins) -> None:
        self.margins.extend(margins)

    def notice(self, text: str) -> None:
        self.notices.append(text)

    @property
    def passed(self) -> bool:
        if self.hypothesis is not None and not self.hypothesis.established:
            return False
        return all(m.passed for m in self.margins)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def failures(self) -> list[Margin]:
        return [m for m in self.margins if not m.passed]

    def worst_slack(self) -> float:
        return min((m.slack for m in self.margins), default=math.inf)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "inputs_digest": self.inputs_digest,
            "verdict": self.verdict,
            "margins": [m.to_json() for m in self.margins],
            "tolerances": dict(self.tolerances),
            "levels": dict(self.levels),
            "notices": list(self.notices),
            "hypothesis": None if self.hypothesis is None else self.hypothesis.to_json(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, obj: dict) -> "VerificationReport":
        hyp = obj.get("hypothesis")
        return cls(
            obj["id"],
            obj["inputs_digest"],
            [Margin.from_json(m) for m in obj.get("margins", [])],
            dict(obj.get("tolerances", {})),
            dict(obj.get("levels", {})),
            list(obj.get("notices", [])),
            None if hyp is None else HypothesisCheck.from_json(hyp),
        )


def make_report(check: str, payload: Any, **params: Any) -> VerificationReport:
    """Empty report whose digest covers the inputs and the check parameters."""
    d = digest({"check": check, "inputs": payload, "params": params})
    return VerificationReport(id=f"{check}:{d[:12]}", inputs_digest=d)
