"""Numeric probes of quantified conditions on finite grids.

A probe cannot prove an infinite statement; it reports trends.  The trend
of a log-ratio sequence is its least-squares slope against ``log j`` over the
top decade ``J/10 <= j <= J``.  A slope above :data:`DIVERGENCE_SLOPE`
flags divergence.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from ..growth_dsl.spec import KoetheMatrixSpec, evaluate_grid
from ..growth_dsl.tabulated import TabulatedMatrix, square_tab
from ..verdict import Verdict

DIVERGENCE_SLOPE = 0.05
HARMONIC_MARGIN = 0.05


def _top_decade(J: int) -> slice:
    lo = max(1, int(np.ceil(J / 10)))
    if J - lo < 1:
        lo = max(1, J - 1)
    return slice(lo - 1, J)


def trend_slope(log_values: np.ndarray) -> float:
    """Slope of ``log_values[j-1]`` against ``log j`` over the top decade."""
    log_values = np.asarray(log_values, dtype=float)
    J = log_values.shape[0]
    if J < 2:
        return 0.0
    sl = _top_decade(J)
    x = np.log(np.arange(1, J + 1, dtype=float))[sl]
    y = log_values[sl]
    xc = x - x.mean()
    return float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))


@dataclass(frozen=True)
class DominationCell:
    q: int
    r: int
    C_best: float
    log_C_best: float
    slope: float

    @property
    def diverging(self) -> bool:
        return self.slope > DIVERGENCE_SLOPE

    @property
    def clearly_bounded(self) -> bool:
        return self.slope < -DIVERGENCE_SLOPE

    def to_json(self) -> dict:
        out = asdict(self)
        out["C_best"] = self.C_best if np.isfinite(self.C_best) else None
        out["diverging"] = self.diverging
        return out


def _check_cols(tab: TabulatedMatrix, cols: Iterable[int], what: str) -> None:
    for c in cols:
        if not 0 <= c < tab.Q:
            raise ValueError(f"{what} {c} exceeds grid with Q = {tab.Q}")


def _ratio_cell(log_ratio: np.ndarray, q: int, r: int) -> DominationCell:
    m = float(np.max(log_ratio))
    return DominationCell(q, r, float(np.exp(m)) if m < 700 else float("inf"), m,
                          trend_slope(log_ratio))


def probe_domination(tabA: TabulatedMatrix, tabB: TabulatedMatrix, q: int,
                     r_range: int | Iterable[int]) -> list[DominationCell]:
    """Per r: ``C_best = max_j a_{j,q}/b_{j,r}`` and the trend slope of the ratio."""
    rs = [r_range] if isinstance(r_range, (int, np.integer)) else list(r_range)
    if tabA.J != tabB.J:
        raise ValueError(f"row counts differ: {tabA.J} vs {tabB.J}")
    _check_cols(tabA, [q], "q")
    _check_cols(tabB, rs, "r-range")
    a = tabA.log_entries[:, q]
    return [_ratio_cell(a - tabB.log_entries[:, r], q, r) for r in rs]


@dataclass(frozen=True)
class NuclearityProbe:
    q: int
    r: int
    checkpoints: tuple[int, ...]
    partial_sums: tuple[float, ...]
    term_slope: float
    sum_slope: float

    @property
    def diverging(self) -> bool:
        return self.term_slope > -1 + HARMONIC_MARGIN or self.sum_slope > DIVERGENCE_SLOPE

    @property
    def clearly_bounded(self) -> bool:
        return self.term_slope < -1 - HARMONIC_MARGIN and self.sum_slope <= DIVERGENCE_SLOPE

    def to_json(self) -> dict:
        out = asdict(self)
        out["diverging"] = self.diverging
        return out


def probe_nuclearity(tab: TabulatedMatrix, q: int, r: int) -> NuclearityProbe:
    """Partial sums of ``a_{j,q}/a_{j,r}`` and their trend."""
    _check_cols(tab, [q, r], "grade")
    log_terms = tab.log_entries[:, q] - tab.log_entries[:, r]
    log_psum = np.logaddexp.accumulate(log_terms)
    J = tab.J
    marks = sorted({min(J, 10 ** k) for k in range(1, int(np.log10(J)) + 1)} | {J})
    return NuclearityProbe(q, r, tuple(marks), tuple(float(np.exp(log_psum[m - 1])) for m in marks),
                           trend_slope(log_terms), trend_slope(log_psum))


@dataclass(frozen=True)
class ContinuousNormProbe:
    p: int
    min_entry: float
    slope: float  # trend of -log a_{j,p}

    @property
    def diverging(self) -> bool:
        return self.slope > DIVERGENCE_SLOPE

    @property
    def clearly_bounded(self) -> bool:
        return self.slope < -DIVERGENCE_SLOPE

    def to_json(self) -> dict:
        out = asdict(self)
        out["diverging"] = self.diverging
        return out


def probe_continuous_norm(tab: TabulatedMatrix, p: int) -> ContinuousNormProbe:
    _check_cols(tab, [p], "p")
    col = tab.log_entries[:, p]
    return ContinuousNormProbe(p, float(np.exp(col.min())), trend_slope(-col))


@dataclass(frozen=True)
class DNProbe:
    p: int
    per_q: dict[int, tuple[int, float]]
    required: int

    @property
    def resolved(self) -> bool:
        return all(q in self.per_q for q in range(self.required + 1))

    @property
    def diverging(self) -> bool:
        return not self.resolved

    @property
    def clearly_bounded(self) -> bool:
        return self.resolved

    def to_json(self) -> dict:
        return {"p": self.p, "per_q": {str(q): {"r": r, "C": c} for q, (r, c) in self.per_q.items()},
                "resolved": self.resolved}


def _dn_row(log_a: np.ndarray, base: np.ndarray) -> dict[int, tuple[int, float]]:
    Q = log_a.shape[1]
    per_q = {}
    for q in range(Q):
        for r in range(q, Q):
            lr = 2 * log_a[:, q] - base - log_a[:, r]
            if trend_slope(lr) <= DIVERGENCE_SLOPE:
                m = float(lr.max())
                per_q[q] = (r, float(np.exp(m)) if m < 700 else float("inf"))
                break
    return per_q


def probe_DN(tab: TabulatedMatrix, p_max: int | None = None) -> DNProbe:
    """Best p: the one whose ``a_q^2 / (a_p a_r)`` is trend-bounded for most q."""
    p_max = tab.Q - 1 if p_max is None else min(p_max, tab.Q - 1)
    best = None
    for p in range(p_max + 1):
        per_q = _dn_row(tab.log_entries, tab.log_entries[:, p])
        if best is None or len(per_q) > len(best[1]):
            best = (p, per_q)
    return DNProbe(best[0], best[1], (tab.Q - 1) // 2)


def consistency_check(verdict: Verdict, probe) -> bool:
    """False iff a Proved verdict meets a diverging probe, or a Refuted one a
    clearly bounded probe.  ``probe`` may be one probe or a sequence."""
    probes = list(probe) if isinstance(probe, (list, tuple)) else [probe]
    if verdict.is_proved:
        return not any(p.diverging for p in probes)
    if verdict.is_refuted:
        return not any(p.clearly_bounded for p in probes)
    return True


# -- classification cross-check ---------------------------------------------

def _domination_probes(grid_a, grid_b, verdict: Verdict) -> list:
    Q = grid_b.Q
    if verdict.is_proved and verdict.witness.r_template is not None:
        cells = []
        for q in range(grid_a.Q):
            if verdict.witness.r_at(q) <= Q - 1:
                cells += probe_domination(grid_a, grid_b, q, Q - 1)
        return cells
    if verdict.is_refuted and verdict.certificate.q0 is not None and verdict.certificate.q0 < grid_a.Q:
        return probe_domination(grid_a, grid_b, verdict.certificate.q0, Q - 1)
    return []


def _member_probes(key: str, verdict: Verdict, grid: TabulatedMatrix,
                   grid_sq: TabulatedMatrix) -> list[tuple[Verdict, list]]:
    """(verdict, probes) pairs; conjunctions are split into their members."""
    Q = grid.Q
    if key == "nuclear":
        if verdict.is_proved:
            return [(verdict, [probe_nuclearity(grid, q, Q - 1) for q in range(Q)
                               if verdict.witness.r_at(q) <= Q - 1])]
        if verdict.is_refuted and verdict.certificate.q0 is not None and verdict.certificate.q0 < Q:
            return [(verdict, [probe_nuclearity(grid, verdict.certificate.q0, Q - 1)])]
        return []
    if key == "continuous_norm_row":
        if verdict.is_proved and verdict.witness.p < Q:
            return [(verdict, [probe_continuous_norm(grid, verdict.witness.p)])]
        if verdict.is_refuted:
            return [(verdict, [probe_continuous_norm(grid, Q - 1)])]
        return []
    if key == "dn":
        if not verdict.is_proved or verdict.witness.p >= Q:
            return []
        w = verdict.witness
        base = grid.log_entries[:, w.p]
        cells = [_ratio_cell(2 * grid.log_entries[:, q] - base - grid.log_entries[:, Q - 1], q, Q - 1)
                 for q in range(Q) if w.r_at(q) <= Q - 1]
        return [(verdict, cells)]
    if key == "sqrt_closed":
        return [(verdict, _domination_probes(grid_sq, grid, verdict))]
    if key == "algebra":
        return [(verdict, _domination_probes(grid, grid_sq, verdict))]
    if key == "self_equivalence":
        ev = verdict.evidence or {}
        out = []
        if "forward" in ev:
            out.append((ev["forward"], _domination_probes(grid, grid_sq, ev["forward"])))
        if "backward" in ev:
            out.append((ev["backward"], _domination_probes(grid_sq, grid, ev["backward"])))
        return out
    return []


def probe_classification(spec: KoetheMatrixSpec | None, verdicts: dict[str, Verdict], J: int, Q: int,
                         grid: TabulatedMatrix | None = None) -> tuple[dict, bool]:
    """Probe each member verdict on a J x Q grid; returns (summary, consistent)."""
    if grid is None:
        try:
            grid = evaluate_grid(spec, J, Q)
        except LookupError as exc:
            return {"J": J, "Q": Q, "skipped": str(exc)}, True
    grid_sq = square_tab(grid)
    checks = {}
    consistent = True
    for key, verdict in verdicts.items():
        if key == "koethe":
            continue
        pairs = _member_probes(key, verdict, grid, grid_sq)
        ok = all(consistency_check(v, probes) for v, probes in pairs)
        consistent &= ok
        checks[key] = {"state": verdict.state.value, "consistent": ok,
                       "cells": [p.to_json() for _, probes in pairs for p in probes]}
    return {"J": grid.J, "Q": grid.Q, "checks": checks, "consistent": consistent}, consistent


def check_tabulated(tab: TabulatedMatrix) -> dict:
    """Probe-only summary for a grid (no symbolic verdicts exist)."""
    Q = tab.Q
    return {
        "J": tab.J, "Q": Q,
        "nuclearity": [probe_nuclearity(tab, q, Q - 1).to_json() for q in range(Q - 1)],
        "continuous_norm": probe_continuous_norm(tab, 0).to_json(),
        "dn": probe_DN(tab).to_json(),
        "sqrt_closed": [c.to_json() for q in range(Q) for c in probe_domination(square_tab(tab), tab, q, Q - 1)],
    }


__all__ = [
    "ContinuousNormProbe", "DIVERGENCE_SLOPE", "DNProbe", "DominationCell", "NuclearityProbe",
    "check_tabulated", "consistency_check", "probe_DN", "probe_classification",
    "probe_continuous_norm", "probe_domination", "probe_nuclearity", "trend_slope",
]
