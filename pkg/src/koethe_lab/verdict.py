"""Tri-state results of the decision procedures."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Iterable

from .growth_dsl.poly import CoefficientPoly


class State(str, enum.Enum):
    PROVED = "Proved"
    REFUTED = "Refuted"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class Witness:
    """Existential data behind a Proved verdict.

    ``r_template`` is ``(a, b)`` meaning ``r = a*q + b``.  ``log_C`` is a
    polynomial in q with ``C(q) = exp(log_C(q))``; None means a constant exists
    but was not computed exactly.  ``per_q`` holds ``(q, r, C)`` triples for
    checks on finite grids.
    """

    p: int | None = None
    r_template: tuple[int, int] | None = None
    log_C: CoefficientPoly | None = None
    per_q: tuple[tuple[int, int, float], ...] | None = None

    @property
    def C(self) -> float | None:
        if self.log_C is None or not self.log_C.is_constant():
            return None
        return math.exp(float(self.log_C.constant_term))

    def r_at(self, q: int) -> int | None:
        if self.r_template is None:
            return None
        a, b = self.r_template
        return a * q + b

    def to_json(self) -> dict:
        out: dict[str, Any] = {}
        if self.p is not None:
            out["p"] = self.p
        if self.r_template is not None:
            out["r"] = {"a": self.r_template[0], "b": self.r_template[1]}
        if self.log_C is not None:
            out["log_C"] = str(self.log_C)
            out["C"] = self.C
        if self.per_q is not None:
            out["per_q"] = [{"q": q, "r": r, "C": c} for q, r, c in self.per_q]
        return out


@dataclass(frozen=True)
class Certificate:
    """Why a Refuted verdict holds.

    ``code`` names the rule that fired; ``q0`` the grade at which it fired
    (None when the statement fails for every grade); ``basis`` the basis
    function that carries the violation.
    """

    code: str
    q0: int | None = None
    basis: str | None = None
    j: int | None = None
    detail: str = ""

    def to_json(self) -> dict:
        out: dict[str, Any] = {"code": self.code}
        for key in ("q0", "basis", "j"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class Verdict:
    state: State
    witness: Witness | None = None
    certificate: Certificate | None = None
    evidence: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.state is State.PROVED and self.witness is None:
            raise ValueError("a Proved verdict needs a witness")
        if self.state is State.REFUTED and self.certificate is None:
            raise ValueError("a Refuted verdict needs a certificate")

    @classmethod
    def proved(cls, witness: Witness | None = None, **evidence) -> "Verdict":
        return cls(State.PROVED, witness=witness or Witness(), evidence=evidence or None)

    @classmethod
    def refuted(cls, certificate: Certificate, **evidence) -> "Verdict":
        return cls(State.REFUTED, certificate=certificate, evidence=evidence or None)

    @classmethod
    def undecided(cls, **evidence) -> "Verdict":
        return cls(State.UNDECIDED, evidence=evidence or None)

    @property
    def is_proved(self) -> bool:
        return self.state is State.PROVED

    @property
    def is_refuted(self) -> bool:
        return self.state is State.REFUTED

    @property
    def is_decided(self) -> bool:
        return self.state is not State.UNDECIDED

    def to_json(self) -> dict:
        out: dict[str, Any] = {"state": self.state.value}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.evidence:
            out["evidence"] = _jsonable(self.evidence)
        return out


def conjunction(verdicts: Iterable[Verdict], **evidence) -> Verdict:
    """AND of verdicts: any Refuted decides; Proved only if every member is."""
    verdicts = list(verdicts)
    for v in verdicts:
        if v.is_refuted:
            return Verdict.refuted(v.certificate, **evidence)
    if all(v.is_proved for v in verdicts):
        return Verdict.proved(Witness(), **evidence)
    return Verdict.undecided(**evidence)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (Verdict, Witness, Certificate)):
        return obj.to_json()
    if isinstance(obj, CoefficientPoly):
        return str(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if hasattr(obj, "item"):
        return obj.item()
    return obj
