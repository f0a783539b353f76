"""Witness search on finite grids, independent of the symbolic engine.

A witness for ``x_j <= C y_j`` is accepted when the log ratio does not trend
upward over the last half of the rows and, if a cap is given, its maximum stays
under ``log cap``.  Proved verdicts are checked without a cap (their
constants can be astronomically large), Refuted ones against ``C_MAX``.
"""

import numpy as np

R_MAX = 12
C_MAX = 1e6
SLOPE_TOL = 0.05
SUMMABLE_SLOPE = -1.05


def _slope(log_vals):
    J = log_vals.shape[0]
    j = np.arange(J // 2, J) + 1
    return np.polyfit(np.log(j), log_vals[J // 2:], 1)[0]


def bounded(log_ratio, cap=None) -> bool:
    if cap is not None and log_ratio.max() > np.log(cap):
        return False
    return _slope(log_ratio) <= SLOPE_TOL


def summable_terms(log_terms) -> bool:
    return _slope(log_terms) <= SUMMABLE_SLOPE


def domination_r(LA, LB, q, cap=None):
    """Smallest r <= R_MAX with a_q <= C b_r on the grid, or None."""
    for r in range(min(R_MAX, LB.shape[1] - 1) + 1):
        if bounded(LA[:, q] - LB[:, r], cap):
            return r
    return None


def nuclear_r(L, q):
    for r in range(q, min(R_MAX, L.shape[1] - 1) + 1):
        if summable_terms(L[:, q] - L[:, r]):
            return r
    return None


def dn_r(L, p, q, cap=None):
    for r in range(min(R_MAX, L.shape[1] - 1) + 1):
        if bounded(2 * L[:, q] - L[:, p] - L[:, r], cap):
            return r
    return None
