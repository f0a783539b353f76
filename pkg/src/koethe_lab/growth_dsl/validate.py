"""Köthe-axiom checks for symbolic specs and finite grids."""

from __future__ import annotations

import numpy as np

from .basis import Kind
from .poly import SIGN_WINDOW, CoefficientPoly
from .spec import KoetheMatrixSpec
from .tabulated import TabulatedMatrix

_PROBE_J = np.unique(np.concatenate([np.arange(1, 65), 2 ** np.arange(7, 61)])).astype(np.int64)


def _nonnegative_everywhere(p: CoefficientPoly) -> bool:
    if p.is_zero():
        return True
    if any(p.sign_at(q) < 0 for q in range(SIGN_WINDOW + 1)):
        return False
    return p.tail_sign_stable() and p.tail_sign() > 0


def _probe_indices(spec: KoetheMatrixSpec, diffs, q: int) -> np.ndarray:
    js = _PROBE_J
    for f, d in zip(spec.basis, diffs):
        if f.kind is not Kind.SEQ or d(q) == 0:
            continue
        if f.samples is None:
            return np.empty(0, dtype=np.int64)
        if not callable(f.samples):
            js = js[js <= f.samples.shape[0]]
    return js


def _find_violation(spec: KoetheMatrixSpec, diffs) -> tuple[int, int] | None:
    for q in range(SIGN_WINDOW + 1):
        js = _probe_indices(spec, diffs, q)
        if js.size == 0:
            continue
        total = np.zeros(js.shape)
        scale = np.zeros(js.shape)
        for f, d in zip(spec.basis, diffs):
            dq = float(d(q))
            if dq == 0:
                continue
            term = dq * f.values(js)
            total += term
            scale += np.abs(term)
        bad = np.nonzero(total < -1e-12 * np.maximum(scale, 1.0))[0]
        if bad.size:
            return int(js[bad[0]]), q
    return None


def validate_koethe(A):
    """Check a_{j,q} > 0 and a_{j,q} <= a_{j,q+1}.

    Positivity is automatic (entries are exponentials / strictly positive
    grid values).  For a spec, monotonicity is Proved when every coefficient
    difference ``c(q+1) - c(q)`` is nonnegative for all q; named sequences are
    nonnegative by declaration.  A concrete violating (j, q) gives Refuted.
    """
    from ..verdict import Certificate, Verdict, Witness

    if isinstance(A, TabulatedMatrix):
        hit = A.first_monotonicity_violation()
        if hit is not None:
            j, q = hit
            return Verdict.refuted(Certificate("entries-decrease-in-q", q0=q, j=j))
        return Verdict.proved(Witness(), scope=f"grid {A.J}x{A.Q}")
    if not isinstance(A, KoetheMatrixSpec):
        raise TypeError(f"expected a spec or a tabulated grid, got {type(A).__name__}")

    diffs = [c.compose_affine(1, 1) - c for c in A.coeffs]
    if all(_nonnegative_everywhere(d) for d in diffs):
        return Verdict.proved(Witness())
    hit = _find_violation(A, diffs)
    if hit is not None:
        j, q = hit
        bad = [f.ref() for f, d in zip(A.basis, diffs) if d(q) < 0]
        return Verdict.refuted(Certificate("entries-decrease-in-q", q0=q, j=j,
                                           basis=bad[0] if bad else None))
    return Verdict.undecided(reason="a coefficient decreases in q but no violating entry was found")
