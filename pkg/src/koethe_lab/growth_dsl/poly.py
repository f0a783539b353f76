"""Exact rational polynomials in the grading index q."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Number = Union[int, Fraction]

# Polynomial signs are checked exhaustively on 0..SIGN_WINDOW; beyond that the
# sign must be fixed by the leading coefficient (Cauchy root bound).
SIGN_WINDOW = 64


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("CoefficientPoly takes exact rationals, not floats")
    return Fraction(x)


@dataclass(frozen=True)
class CoefficientPoly:
    """Polynomial ``c(q) = sum_i coeffs[i] * q**i`` with rational coefficients.

    Trailing zeros are stripped, so the zero polynomial has ``coeffs == ()``
    and structural equality is polynomial equality.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        cs = [_as_fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def const(cls, c: Number) -> "CoefficientPoly":
        return cls((c,))

    @classmethod
    def linear(cls, slope: Number, intercept: Number = 0) -> "CoefficientPoly":
        return cls((intercept, slope))

    @classmethod
    def q(cls) -> "CoefficientPoly":
        return cls((0, 1))

    # -- structure --------------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @property
    def constant_term(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "CoefficientPoly") -> "CoefficientPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return CoefficientPoly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "CoefficientPoly":
        return CoefficientPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "CoefficientPoly") -> "CoefficientPoly":
        return self + (-other)

    def __mul__(self, other) -> "CoefficientPoly":
        if isinstance(other, CoefficientPoly):
            if self.is_zero() or other.is_zero():
                return CoefficientPoly()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for k, b in enumerate(other.coeffs):
                    out[i + k] += a * b
            return CoefficientPoly(tuple(out))
        s = _as_fraction(other)
        return CoefficientPoly(tuple(c * s for c in self.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "CoefficientPoly":
        out = CoefficientPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, q) -> Fraction:
        """Exact value at ``q`` (Horner)."""
        q = _as_fraction(q)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def at_float(self, q: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * q + float(c)
        return acc

    def compose_affine(self, a: int, b: int) -> "CoefficientPoly":
        """Return ``q -> self(a*q + b)``."""
        inner = CoefficientPoly((b, a))
        out = CoefficientPoly()
        for c in reversed(self.coeffs):
            out = out * inner + CoefficientPoly.const(c)
        return out

    # -- sign analysis over q in N_0 --------------------------------------
    def root_bound(self) -> Fraction:
        """Cauchy bound: every real root has absolute value below this."""
        if self.degree <= 0:
            return Fraction(0)
        lead = abs(self.leading)
        return 1 + max(abs(c) / lead for c in self.coeffs[:-1])

    def tail_sign_stable(self, window: int = SIGN_WINDOW) -> bool:
        """True if the sign is constant for all integers ``q > window``."""
        return self.root_bound() <= window + 1

    def tail_sign(self) -> int:
        return (self.leading > 0) - (self.leading < 0)

    def sign_at(self, q: int) -> int:
        v = self(q)
        return (v > 0) - (v < 0)

    def sup_over_naturals(self) -> Fraction | None:
        """``sup_{q >= 0} c(q)`` when it is finite and cheaply certified.

        Handles constants and affine polynomials; returns None otherwise
        (including when the supremum is infinite).
        """
        if self.degree <= 0:
            return self.constant_term
        if self.degree == 1 and self.leading < 0:
            return self.constant_term
        return None

    # -- printing ---------------------------------------------------------
    def is_monomial(self) -> bool:
        return sum(1 for c in self.coeffs if c != 0) <= 1

    def __str__(self) -> str:
        return format_poly(self)


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: CoefficientPoly) -> str:
    """Render as DSL text, e.g. ``2*q^2 - q + 1/2``."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for i in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = _fmt_rational(mag)
        else:
            mono = "q" if i == 1 else f"q^{i}"
            body = mono if mag == 1 else f"{_fmt_rational(mag)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def poly_from_iter(values: Iterable[Number]) -> CoefficientPoly:
    return CoefficientPoly(tuple(_as_fraction(v) for v in values))


def fraction_from_text(text: str) -> Fraction:
    """Parse ``3``, ``-2/5`` or ``0.25`` exactly."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(text)


def exp_fraction(x: Fraction) -> float:
    return math.exp(float(x))
