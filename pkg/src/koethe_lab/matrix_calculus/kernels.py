"""Sign-scan kernels over merged growth bases.

A *combo* is a linear combination ``sum_k c_k(q) phi_k(j)`` whose
coefficients are polynomials in one grade variable.  The kernels decide, for
every grade q in N_0 at once, whether ``sup_j combo`` is finite
(:func:`bounded_above`) or ``sum_j exp(combo)`` converges (:func:`summable`).

Every q in ``0..SIGN_WINDOW`` is checked exactly.  Beyond the window the
sign of each coefficient is its leading sign, provided the Cauchy root bound
certifies no sign change there; otherwise the tail is Undecided.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from ..growth_dsl.basis import GrowthBasisFunction, GrowthClass, Kind
from ..growth_dsl.poly import SIGN_WINDOW, CoefficientPoly
from ..growth_dsl.spec import KoetheMatrixSpec
from ..verdict import Certificate, Verdict, Witness

TAIL = "tail"
TAIL_Q = SIGN_WINDOW + 1


class MergeError(ValueError):
    """Two specs use the same basis name with different declarations."""


class _Unstable(Exception):
    pass


class Combo:
    """Immutable-by-convention map basis identity -> (function, coefficient)."""

    __slots__ = ("items",)

    def __init__(self, items: dict | None = None):
        self.items: dict[tuple, tuple[GrowthBasisFunction, CoefficientPoly]] = dict(items or {})

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[GrowthBasisFunction, CoefficientPoly]]) -> "Combo":
        out = cls()
        for f, c in terms:
            out = out + cls({f.identity: (f, c)})
        return out

    def __add__(self, other: "Combo") -> "Combo":
        out = dict(self.items)
        for key, (f, c) in other.items.items():
            if key in out:
                g, d = out[key]
                if g.growth is not f.growth or g.theta != f.theta:
                    raise MergeError(f"unmergeable bases: {g.ref()} declared as "
                                     f"{g.class_text()} and {f.class_text()}")
                out[key] = (g, d + c)
            else:
                out[key] = (f, c)
        return Combo(out)

    def scaled(self, s) -> "Combo":
        return Combo({k: (f, c * s) for k, (f, c) in self.items.items()})

    def __neg__(self) -> "Combo":
        return self.scaled(-1)

    def __sub__(self, other: "Combo") -> "Combo":
        return self + (-other)

    def nonzero(self) -> list[tuple[GrowthBasisFunction, CoefficientPoly]]:
        return [(f, c) for f, c in self.items.values() if not c.is_zero()]

    def groups(self) -> list[tuple[tuple, list[tuple[GrowthBasisFunction, CoefficientPoly]]]]:
        """Unbounded groups with a nonzero coefficient, fastest first."""
        table: dict[tuple, list] = {}
        for f, c in self.nonzero():
            if f.is_unbounded():
                table.setdefault(f.group_key, []).append((f, c))
        return sorted(table.items(), key=lambda kv: kv[0], reverse=True)

    def constant_part(self) -> CoefficientPoly:
        one = GrowthBasisFunction.one().identity
        return self.items[one][1] if one in self.items else CoefficientPoly()

    def has_bounded_sequence(self) -> bool:
        return any(f.kind is Kind.SEQ and not f.is_unbounded() for f, _ in self.nonzero())

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*{f.ref()}" for f, c in self.nonzero()) or "0"
        return f"Combo[{body}]"


def spec_combo(spec: KoetheMatrixSpec, template: tuple[int, int] | None = None,
               at: int | None = None, scale=1) -> Combo:
    """Coefficients of ``scale * log a_{j, r}`` as polynomials in q.

    ``r = q`` by default, ``r = a*q + b`` for ``template=(a, b)``, or the fixed
    grade ``at`` (constant polynomials).
    """
    items = {}
    for f, c in zip(spec.basis, spec.coeffs):
        if template is not None:
            c = c.compose_affine(*template)
        elif at is not None:
            c = CoefficientPoly.const(c(at))
        items[f.identity] = (f, c * scale)
    return Combo(items)


def points() -> Iterator[int | str]:
    yield from range(SIGN_WINDOW + 1)
    yield TAIL


def point_q(pt) -> int:
    return TAIL_Q if pt == TAIL else pt


def sign(poly: CoefficientPoly, pt) -> int:
    if pt == TAIL:
        if poly.is_zero():
            return 0
        if not poly.tail_sign_stable():
            raise _Unstable()
        return poly.tail_sign()
    return poly.sign_at(pt)


@dataclass(frozen=True)
class Leading:
    status: str  # "bounded" | "neg" | "pos" | "mixed"
    group: tuple | None = None
    members: tuple = ()

    @property
    def basis(self) -> str | None:
        return self.members[0][0].ref() if self.members else None


def leading(combo: Combo, pt, groups=None) -> Leading:
    """Sign of the fastest unbounded group with a nonzero coefficient at ``pt``."""
    for key, members in groups if groups is not None else combo.groups():
        live = [(f, c, sign(c, pt)) for f, c in members]
        live = [(f, c, s) for f, c, s in live if s != 0]
        if not live:
            continue
        signs = {s for _, _, s in live}
        members_t = tuple((f, c) for f, c, _ in live)
        if signs == {1}:
            return Leading("pos", key, members_t)
        if signs == {-1}:
            return Leading("neg", key, members_t)
        return Leading("mixed", key, members_t)
    return Leading("bounded")


def exact_log_C(combo: Combo) -> CoefficientPoly | None:
    """log of a valid constant when every unbounded coefficient is <= 0.

    All basis functions are nonnegative for j >= 1, so then
    ``sup_j combo <= constant part``.  None if that shortcut does not apply.
    """
    if combo.has_bounded_sequence():
        return None
    try:
        for _, members in combo.groups():
            for _, c in members:
                if any(sign(c, pt) > 0 for pt in points()):
                    return None
    except _Unstable:
        return None
    return combo.constant_part()


def certifies_bounded(combo: Combo) -> bool:
    """Fast yes/no form of :func:`bounded_above` (early exit)."""
    groups = combo.groups()
    try:
        for pt in points():
            if leading(combo, pt, groups).status not in ("bounded", "neg"):
                return False
    except _Unstable:
        return False
    return True


def bounded_above(combo: Combo) -> Verdict:
    """Is ``sup_j combo(q, j)`` finite for every q?"""
    groups = combo.groups()
    undecided = []
    for pt in points():
        try:
            lead = leading(combo, pt, groups)
        except _Unstable:
            undecided.append((pt, "sign change beyond window"))
            continue
        if lead.status == "pos":
            return Verdict.refuted(Certificate("positive-leading", point_q(pt), lead.basis))
        if lead.status == "mixed":
            undecided.append((pt, f"incomparable terms in group of {lead.basis}"))
    if undecided:
        return Verdict.undecided(points=[str(p) for p, _ in undecided[:8]],
                                 reason=undecided[0][1])
    return Verdict.proved(Witness(log_C=exact_log_C(combo)))


def _summable_at(combo: Combo, pt, groups) -> tuple[str, str, str | None]:
    lead = leading(combo, pt, groups)
    if lead.status == "bounded":
        return "refuted", "terms-do-not-vanish", None
    if lead.status == "pos":
        return "refuted", "positive-leading", lead.basis
    if lead.status == "mixed":
        return "undecided", "incomparable terms", lead.basis
    if lead.group[0] > GrowthClass.LOG:
        return "proved", "", lead.basis
    if any(f.kind is Kind.SEQ for f, _ in lead.members):
        return "undecided", "log-class sequence at the summability threshold", lead.basis
    d = lead.members[0][1]
    if sign(d + CoefficientPoly.const(1), pt) < 0:
        return "proved", "", lead.basis
    return "refuted", "log-exponent-at-least-minus-one", lead.basis


def certifies_summable(combo: Combo) -> bool:
    groups = combo.groups()
    try:
        return all(_summable_at(combo, pt, groups)[0] == "proved" for pt in points())
    except _Unstable:
        return False


def summable(combo: Combo) -> Verdict:
    """Is ``sum_j exp(combo(q, j))`` finite for every q?"""
    groups = combo.groups()
    undecided = []
    for pt in points():
        try:
            state, code, basis = _summable_at(combo, pt, groups)
        except _Unstable:
            undecided.append((pt, "sign change beyond window"))
            continue
        if state == "refuted":
            return Verdict.refuted(Certificate(code, point_q(pt), basis))
        if state == "undecided":
            undecided.append((pt, code))
    if undecided:
        return Verdict.undecided(points=[str(p) for p, _ in undecided[:8]],
                                 reason=undecided[0][1])
    return Verdict.proved(Witness())


def values_at(members, q: int) -> list[Fraction]:
    return [c(q) for _, c in members]
