"""Symbolic Köthe matrices a_{j,q} = exp(sum_k c_k(q) * phi_k(j))."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

import numpy as np

from .basis import GrowthBasisFunction, Kind, SampleSource
from .poly import CoefficientPoly


@dataclass(frozen=True)
class KoetheMatrixSpec:
    """A log-linear Köthe matrix over an ordered growth basis.

    ``basis`` is sorted slowest to fastest; ``coeffs[i]`` is the coefficient
    polynomial of ``basis[i]``.  Built-in basis functions with a zero
    coefficient are dropped; declared named sequences are kept.
    """

    name: str
    basis: tuple[GrowthBasisFunction, ...]
    coeffs: tuple[CoefficientPoly, ...]

    def __post_init__(self):
        if len(self.basis) != len(self.coeffs):
            raise ValueError("basis and coeffs must align")
        merged: dict[tuple, tuple[GrowthBasisFunction, CoefficientPoly]] = {}
        for f, c in zip(self.basis, self.coeffs):
            if f.identity in merged:
                g, d = merged[f.identity]
                if g != f:
                    raise ValueError(f"conflicting declarations of {f}")
                merged[f.identity] = (g if g.samples is not None else f, d + c)
            else:
                merged[f.identity] = (f, c)
        items = [(f, c) for f, c in merged.values() if f.kind is Kind.SEQ or not c.is_zero()]
        items.sort(key=lambda fc: fc[0].sort_key)
        object.__setattr__(self, "basis", tuple(f for f, _ in items))
        object.__setattr__(self, "coeffs", tuple(c for _, c in items))

    @classmethod
    def from_terms(cls, name: str,
                   terms: Iterable[tuple[GrowthBasisFunction, CoefficientPoly]]) -> "KoetheMatrixSpec":
        terms = list(terms)
        return cls(name, tuple(f for f, _ in terms), tuple(c for _, c in terms))

    @property
    def terms(self) -> dict[GrowthBasisFunction, CoefficientPoly]:
        return dict(zip(self.basis, self.coeffs))

    def coefficient(self, f: GrowthBasisFunction) -> CoefficientPoly:
        for g, c in zip(self.basis, self.coeffs):
            if g.identity == f.identity:
                return c
        return CoefficientPoly()

    def sequences(self) -> tuple[GrowthBasisFunction, ...]:
        return tuple(f for f in self.basis if f.kind is Kind.SEQ)

    def with_samples(self, samples: Mapping[str, SampleSource] | None = None,
                     **kw: SampleSource) -> "KoetheMatrixSpec":
        """Attach sample values (arrays indexed from j = 1, or callables of j)."""
        table = dict(samples or {}, **kw)
        unknown = set(table) - {f.name for f in self.sequences()}
        if unknown:
            raise KeyError(f"no such sequences: {sorted(unknown)}")
        basis = tuple(f.with_samples(table[f.name]) if f.kind is Kind.SEQ and f.name in table else f
                      for f in self.basis)
        return replace(self, basis=basis)

    def renamed(self, name: str) -> "KoetheMatrixSpec":
        return replace(self, name=name)

    def __str__(self) -> str:
        from .parser import format_spec
        return format_spec(self)


def log_evaluate(spec: KoetheMatrixSpec, j: int, q: int) -> float:
    if j < 1 or q < 0:
        raise ValueError(f"need j >= 1 and q >= 0, got j={j}, q={q}")
    total = 0.0
    for f, c in zip(spec.basis, spec.coeffs):
        if c.is_zero():
            continue
        total += float(c(q)) * float(f.values(np.array([j]))[0])
    return total


def evaluate(spec: KoetheMatrixSpec, j: int, q: int) -> float:
    """a_{j,q} as a float (may overflow to inf for huge exponents)."""
    return math.exp(log_evaluate(spec, j, q))


def square(spec: KoetheMatrixSpec) -> KoetheMatrixSpec:
    """The matrix (a_{j,q}^2): every coefficient doubled."""
    return replace(spec, name=f"{spec.name}_sq", coeffs=tuple(c * 2 for c in spec.coeffs))


def log_grid(spec: KoetheMatrixSpec, J: int, Q: int) -> np.ndarray:
    """log a_{j,q} for j = 1..J (rows) and q = 0..Q-1 (columns)."""
    if J < 1 or Q < 1:
        raise ValueError("grid needs J >= 1 and Q >= 1")
    j = np.arange(1, J + 1)
    qs = np.arange(Q)
    out = np.zeros((J, Q))
    for f, c in zip(spec.basis, spec.coeffs):
        if c.is_zero():
            continue
        cq = np.array([float(c(q)) for q in qs])
        out += np.outer(f.values(j), cq)
    return out


def evaluate_grid(spec: KoetheMatrixSpec, J: int, Q: int):
    from .tabulated import TabulatedMatrix
    return TabulatedMatrix.from_log(log_grid(spec, J, Q), provenance="evaluated-from-spec",
                                    name=spec.name)
