"""Growth basis functions of the row index j and their declared growth order."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

import numpy as np

from .poly import _fmt_rational

SampleSource = Union[np.ndarray, Callable[[np.ndarray], np.ndarray], None]


class GrowthClass(enum.IntEnum):
    """Asymptotic classes, ordered slowest to fastest.

    ``BOUNDED``: |phi_j| <= M.  ``LOG``: phi_j = Theta(log j).
    ``SUPERLOG``: log j = o(phi_j) and phi_j = o(j^eps) for every eps > 0.
    ``POLY``: phi_j = Theta(j^theta).  ``SUPERPOLY``: j^theta = o(phi_j) for
    every theta.  Functions in distinct classes compare by class (the slower
    one is little-o of the faster one); functions sharing a class and
    parameter are only known to be Theta-equivalent.
    """

    BOUNDED = 0
    LOG = 1
    SUPERLOG = 2
    POLY = 3
    SUPERPOLY = 4


CLASS_KEYWORDS = {
    "bounded": GrowthClass.BOUNDED,
    "log": GrowthClass.LOG,
    "superlog": GrowthClass.SUPERLOG,
    "superpoly": GrowthClass.SUPERPOLY,
}


class Kind(enum.Enum):
    ONE = "one"
    LOG = "log"
    POWER = "power"
    SEQ = "seq"


_KIND_ORDER = {Kind.ONE: 0, Kind.LOG: 1, Kind.POWER: 2, Kind.SEQ: 3}


@dataclass(frozen=True)
class GrowthBasisFunction:
    """One basis function phi(j) for j >= 1.

    ``theta`` is the exponent for ``POWER`` kinds and the class parameter for
    named sequences declared ``poly(theta)``.  Named sequences are assumed
    nonnegative; attached samples are checked against that.
    """

    kind: Kind
    growth: GrowthClass
    theta: Fraction | None = None
    name: str | None = None
    values_path: str | None = None
    samples: SampleSource = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.theta is not None and not isinstance(self.theta, Fraction):
            object.__setattr__(self, "theta", Fraction(self.theta))
        expected = {
            Kind.ONE: GrowthClass.BOUNDED,
            Kind.LOG: GrowthClass.LOG,
            Kind.POWER: GrowthClass.POLY,
        }
        if self.kind in expected and self.growth is not expected[self.kind]:
            raise ValueError(f"{self.kind.value} must have class {expected[self.kind].name}")
        if self.growth is GrowthClass.POLY:
            if self.theta is None or self.theta <= 0:
                raise ValueError(f"power exponent must be positive, got {self.theta}")
        elif self.theta is not None:
            raise ValueError("only poly(theta) classes carry an exponent")
        if (self.kind is Kind.SEQ) != (self.name is not None):
            raise ValueError("named sequences and only those carry a name")
        if isinstance(self.samples, np.ndarray):
            arr = np.asarray(self.samples, dtype=float)
            if arr.ndim != 1 or not np.all(np.isfinite(arr)) or np.any(arr < 0):
                raise ValueError(f"samples of seq({self.name}) must be finite and nonnegative")
            object.__setattr__(self, "samples", arr)

    # -- constructors -----------------------------------------------------
    @classmethod
    def one(cls) -> "GrowthBasisFunction":
        return cls(Kind.ONE, GrowthClass.BOUNDED)

    @classmethod
    def log(cls) -> "GrowthBasisFunction":
        return cls(Kind.LOG, GrowthClass.LOG)

    @classmethod
    def power(cls, theta) -> "GrowthBasisFunction":
        return cls(Kind.POWER, GrowthClass.POLY, theta=Fraction(theta))

    @classmethod
    def seq(cls, name: str, growth: GrowthClass, theta=None, samples: SampleSource = None,
            values_path: str | None = None) -> "GrowthBasisFunction":
        th = Fraction(theta) if theta is not None else None
        return cls(Kind.SEQ, growth, theta=th, name=name, values_path=values_path,
                   samples=samples)

    # -- ordering ---------------------------------------------------------
    @property
    def group_key(self) -> tuple:
        """Functions sharing a group key have no declared relative order."""
        return (int(self.growth), self.theta if self.theta is not None else Fraction(0))

    @property
    def sort_key(self) -> tuple:
        return self.group_key + (_KIND_ORDER[self.kind], self.name or "")

    @property
    def identity(self) -> tuple:
        return (self.kind, self.theta, self.name)

    def is_unbounded(self) -> bool:
        return self.growth is not GrowthClass.BOUNDED

    def with_samples(self, samples: SampleSource) -> "GrowthBasisFunction":
        if self.kind is not Kind.SEQ:
            raise ValueError("only named sequences take samples")
        return GrowthBasisFunction.seq(self.name, self.growth, self.theta, samples,
                                       self.values_path)

    # -- evaluation -------------------------------------------------------
    def values(self, j: np.ndarray) -> np.ndarray:
        """phi(j) for an array of indices j >= 1."""
        j = np.asarray(j)
        if self.kind is Kind.ONE:
            return np.ones(j.shape, dtype=float)
        if self.kind is Kind.LOG:
            return np.log(j.astype(float))
        if self.kind is Kind.POWER:
            return j.astype(float) ** float(self.theta)
        if self.samples is None:
            raise LookupError(f"seq({self.name}) has no sample values")
        if callable(self.samples):
            out = np.asarray(self.samples(j.astype(float)), dtype=float)
            return np.broadcast_to(out, j.shape).astype(float)
        if j.size and int(j.max()) > self.samples.shape[0]:
            raise LookupError(
                f"seq({self.name}) has {self.samples.shape[0]} samples, index {int(j.max())} requested")
        return self.samples[j - 1]

    # -- printing ---------------------------------------------------------
    def ref(self) -> str:
        if self.kind is Kind.ONE:
            return "1"
        if self.kind is Kind.LOG:
            return "log(j)"
        if self.kind is Kind.POWER:
            return f"j^{_fmt_rational(self.theta)}"
        return f"seq({self.name})"

    def class_text(self) -> str:
        if self.growth is GrowthClass.POLY:
            return f"poly({_fmt_rational(self.theta)})"
        return {v: k for k, v in CLASS_KEYWORDS.items()}[self.growth]

    def __str__(self) -> str:
        return self.ref()
