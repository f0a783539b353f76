"""Matrix relations and conditions as tri-state decisions.

Every existential grade ``r`` is searched over affine templates
``r = a*q + b`` with ``a <= MAX_SLOPE`` and ``b <= MAX_OFFSET``; a single
grade ``p`` is searched over ``0..MAX_P``.  Failure of the search yields
Undecided.  Refutations need a certificate valid for every ``r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any

from ..growth_dsl.basis import GrowthBasisFunction, Kind
from ..growth_dsl.poly import SIGN_WINDOW, CoefficientPoly
from ..growth_dsl.spec import KoetheMatrixSpec, square
from ..growth_dsl.tabulated import TabulatedMatrix
from ..growth_dsl.validate import validate_koethe
from ..verdict import Certificate, State, Verdict, Witness, conjunction
from .kernels import (Combo, bounded_above, certifies_bounded, certifies_summable, exact_log_C,
                      leading, points, spec_combo, summable, _Unstable)

MAX_SLOPE = 4
MAX_OFFSET = 16
MAX_P = 16

TEMPLATES: tuple[tuple[int, int], ...] = tuple(product(range(MAX_SLOPE + 1), range(MAX_OFFSET + 1)))

_ONE = GrowthBasisFunction.one()

VERDICT_KEYS = ("koethe", "nuclear", "continuous_norm_row", "sqrt_closed", "dn", "algebra",
                "self_equivalence")


def _require_spec(*mats) -> None:
    for m in mats:
        if isinstance(m, TabulatedMatrix):
            raise TypeError("symbolic decisions need a spec; use the probe functions for grids")
        if not isinstance(m, KoetheMatrixSpec):
            raise TypeError(f"expected KoetheMatrixSpec, got {type(m).__name__}")


def _search_bounded(make_combo, templates=TEMPLATES):
    for t in templates:
        combo = make_combo(t)
        if certifies_bounded(combo):
            return t, combo
    return None


# -- domination ------------------------------------------------------------

def _domination_certificate(A: KoetheMatrixSpec, B: KoetheMatrixSpec) -> Certificate | None:
    """Find q0 with ``log a_{j,q0} - log b_{j,r}`` unbounded for every r.

    Walk the unbounded groups fastest first.  B's coefficients there must
    not depend on r; where A(q0) and B agree exactly the group cancels for
    all r and the walk continues.  The first group with A(q0) - B >= 0,
    not identically zero, is an r-independent excess.
    """
    a_combo = spec_combo(A)
    b_combo = spec_combo(B)
    merged = (a_combo - b_combo).items  # raises on unmergeable bases
    keys = sorted({f.group_key for f, _ in merged.values() if f.is_unbounded()}, reverse=True)
    zero = CoefficientPoly()
    for q0 in range(SIGN_WINDOW + 1):
        for key in keys:
            members = [(f, a_combo.items.get(ident, (f, zero))[1], b_combo.items.get(ident, (f, zero))[1])
                       for ident, (f, _) in merged.items() if f.group_key == key]
            if not all(cb.is_constant() for _, _, cb in members):
                break
            diffs = [(f, ca(q0) - cb.constant_term) for f, ca, cb in members]
            if all(d == 0 for _, d in diffs):
                continue
            if all(d >= 0 for _, d in diffs):
                f, d = next((f, d) for f, d in diffs if d > 0)
                return Certificate("r-independent-excess", q0=q0, basis=f.ref(),
                                   detail=f"coefficient excess {d} for every r")
            break
    return None


def dominated_by(A: KoetheMatrixSpec, B: KoetheMatrixSpec) -> Verdict:
    """Decide A ≺ B: for all q some r, C with a_{j,q} <= C * b_{j,r}."""
    _require_spec(A, B)
    base = spec_combo(A)
    found = _search_bounded(lambda t: base - spec_combo(B, template=t))
    if found is not None:
        t, combo = found
        return Verdict.proved(Witness(r_template=t, log_C=exact_log_C(combo)))
    cert = _domination_certificate(A, B)
    if cert is not None:
        return Verdict.refuted(cert)
    return Verdict.undecided(reason="no r-template certified and no r-independent excess",
                             templates_tried=len(TEMPLATES))


def equivalent(A: KoetheMatrixSpec, B: KoetheMatrixSpec) -> Verdict:
    forward = dominated_by(A, B)
    backward = dominated_by(B, A)
    return conjunction([forward, backward], forward=forward, backward=backward)


def verify_domination_witness(A: KoetheMatrixSpec, B: KoetheMatrixSpec, witness: Witness) -> bool:
    """Re-check a witness by substitution and the sign-scan rule."""
    if witness.r_template is None:
        return False
    combo = spec_combo(A) - spec_combo(B, template=witness.r_template)
    v = bounded_above(combo)
    if not v.is_proved:
        return False
    if witness.log_C is None:
        return True
    # the recorded constant must cover sup_j combo exactly
    shifted = combo - Combo({_ONE.identity: (_ONE, witness.log_C)})
    rest = exact_log_C(shifted)
    return rest is not None and _nonpositive(rest)


def compose_witnesses(w1: Witness, w2: Witness) -> Witness:
    """Witness for A ≺ C from A ≺ B (w1) and B ≺ C (w2)."""
    a1, b1 = w1.r_template
    a2, b2 = w2.r_template
    log_C = None
    if w1.log_C is not None and w2.log_C is not None:
        log_C = w1.log_C + w2.log_C.compose_affine(a1, b1)
    return Witness(r_template=(a1 * a2, a2 * b1 + b2), log_C=log_C)


def _nonpositive(p: CoefficientPoly) -> bool:
    if p.is_zero():
        return True
    if any(p.sign_at(q) > 0 for q in range(SIGN_WINDOW + 1)):
        return False
    return p.tail_sign_stable() and p.tail_sign() < 0


# -- single-matrix conditions ----------------------------------------------

def _nuclear_certificate(A: KoetheMatrixSpec) -> Certificate | None:
    """q0 with ``sum_j a_{j,q0}/a_{j,r} = inf`` for every r.

    Needs every unbounded coefficient faster than log(j) to be constant (so
    it cancels), log-class sequences constant too, and
    ``sup_r c_log(r) <= c_log(q0) + 1``.
    """
    log_c = CoefficientPoly()
    for f, c in zip(A.basis, A.coeffs):
        if not f.is_unbounded() or c.is_zero():
            continue
        if f.kind is Kind.LOG:
            log_c = c
        elif not c.is_constant():
            return None
    sup = log_c.sup_over_naturals()
    if sup is None:
        return None
    for q0 in range(SIGN_WINDOW + 1):
        if sup <= log_c(q0) + 1:
            return Certificate("terms-not-summable-for-any-r", q0=q0, basis="log(j)",
                               detail=f"log(j) exponent of a_q/a_r is at least {log_c(q0) - sup}")
    return None


def is_nuclear(A: KoetheMatrixSpec) -> Verdict:
    """For all q some r with sum_j a_{j,q}/a_{j,r} finite."""
    _require_spec(A)
    base = spec_combo(A)
    for t in TEMPLATES:
        combo = base - spec_combo(A, template=t)
        if certifies_summable(combo):
            return Verdict.proved(Witness(r_template=t))
    cert = _nuclear_certificate(A)
    if cert is not None:
        return Verdict.refuted(cert)
    return Verdict.undecided(reason="no r-template makes the ratio summable",
                             templates_tried=len(TEMPLATES))


def has_continuous_norm_row(A: KoetheMatrixSpec) -> Verdict:
    """Some p with inf_j a_{j,p} > 0."""
    _require_spec(A)
    for p in range(MAX_P + 1):
        combo = spec_combo(A, at=p, scale=-1)
        if certifies_bounded(combo):
            log_inv_C = exact_log_C(combo)
            return Verdict.proved(Witness(p=p, log_C=log_inv_C))
    # treat p as the variable: -log a_{j,p} unbounded above for every p
    combo = spec_combo(A, scale=-1)
    groups = combo.groups()
    try:
        leads = [leading(combo, pt, groups) for pt in points()]
    except _Unstable:
        leads = []
    if leads and all(ld.status == "pos" for ld in leads):
        return Verdict.refuted(Certificate("row-decays-for-every-p", q0=None,
                                           basis=leads[-1].basis,
                                           detail="inf_j a_{j,p} = 0 for all p"))
    return Verdict.undecided(reason=f"no p <= {MAX_P} certified", p_tried=MAX_P + 1)


def has_DN(A: KoetheMatrixSpec) -> Verdict:
    """Some p such that for all q some r, C: a_{j,q}^2 <= C a_{j,p} a_{j,r}."""
    _require_spec(A)
    twice = spec_combo(A, scale=2)
    for p in range(MAX_P + 1):
        at_p = twice - spec_combo(A, at=p)
        found = _search_bounded(lambda t: at_p - spec_combo(A, template=t))
        if found is not None:
            t, combo = found
            return Verdict.proved(Witness(p=p, r_template=t, log_C=exact_log_C(combo)))
    return Verdict.undecided(reason="no (p, r-template) certified", p_tried=MAX_P + 1,
                             templates_tried=len(TEMPLATES))


def is_algebra(A: KoetheMatrixSpec) -> Verdict:
    return dominated_by(A, square(A))


def is_sqrt_closed(A: KoetheMatrixSpec) -> Verdict:
    return dominated_by(square(A), A)


def self_equivalent(A: KoetheMatrixSpec) -> Verdict:
    return equivalent(A, square(A))


# -- classification --------------------------------------------------------

@dataclass
class ClassificationReport:
    matrix: str
    verdicts: dict[str, Verdict]
    set4: Verdict
    set5: Verdict
    consistency: bool
    probe: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "matrix": self.matrix,
            "verdicts": {k: v.to_json() for k, v in self.verdicts.items()},
            "condition_sets": {"4": self.set4.state.value, "5": self.set5.state.value},
            "consistency": self.consistency,
            "probe": self.probe,
            "notes": list(self.notes),
        }


def classify(A: KoetheMatrixSpec) -> ClassificationReport:
    """Run every member check and cross-check the two condition sets.

    Set (4): nuclear, a row bounded below, and A² ≺ A.
    Set (5): nuclear, property DN, and A ∼ A².
    The sets are equivalent, so decided but disagreeing sets are reported
    as an inconsistency.
    """
    _require_spec(A)
    koethe = validate_koethe(A)
    if koethe.is_refuted:
        raise ValueError(f"invalid Köthe matrix {A.name!r}: {koethe.certificate.to_json()}")
    v = {
        "koethe": koethe,
        "nuclear": is_nuclear(A),
        "continuous_norm_row": has_continuous_norm_row(A),
        "sqrt_closed": is_sqrt_closed(A),
        "dn": has_DN(A),
        "algebra": is_algebra(A),
        "self_equivalence": self_equivalent(A),
    }
    set4 = conjunction([v["nuclear"], v["continuous_norm_row"], v["sqrt_closed"]])
    set5 = conjunction([v["nuclear"], v["dn"], v["self_equivalence"]])
    consistent = not (set4.is_decided and set5.is_decided and set4.state is not set5.state)
    notes = []
    if not consistent:
        notes.append(f"condition set (4) is {set4.state.value} but set (5) is {set5.state.value}")
    return ClassificationReport(A.name, v, set4, set5, consistent, notes=notes)


__all__ = [
    "ClassificationReport", "MAX_OFFSET", "MAX_P", "MAX_SLOPE", "State", "TEMPLATES",
    "VERDICT_KEYS", "bounded_above", "classify", "compose_witnesses", "dominated_by", "equivalent",
    "has_DN", "has_continuous_norm_row", "is_algebra", "is_nuclear", "is_sqrt_closed",
    "self_equivalent", "summable", "verify_domination_witness",
]
