"""Matching two finite norm profiles up to a row permutation and row scalars.

For rows a_j of A and b_k of B write Δ_q = log a_{j,q} - log b_{k,q}.  The
scalar minimizing ``max_q |Δ_q - log λ|`` is the midrange of Δ, and the
resulting pair cost is half the range of Δ.  The permutation minimizes the
largest pair cost (bottleneck assignment).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .growth_dsl.tabulated import TabulatedMatrix, scale_rows

EXACT_TOL = 1e-9
DEFAULT_MAX_DISTORTION = 1.0


@dataclass(frozen=True, eq=False)
class MatchResult:
    """``sigma[j]`` is the B row matched to A row j (0-based), and
    ``a_{j,q} ≈ λ_j b_{sigma[j],q}`` within a factor ``exp(distortion)``."""

    sigma: np.ndarray
    log_lambda: np.ndarray
    distortion: float
    status: str

    @property
    def lambdas(self) -> np.ndarray:
        return np.exp(self.log_lambda)

    def to_json(self) -> dict:
        return {"sigma": [int(s) for s in self.sigma], "log_lambda": [float(x) for x in self.log_lambda],
                "distortion": float(self.distortion), "status": self.status}


def normalize_profile(tab: TabulatedMatrix, l2row) -> TabulatedMatrix:
    """Divide row j by ``l2row[j]``."""
    l2 = np.asarray(l2row, dtype=float)
    if l2.shape != (tab.J,):
        raise ValueError(f"need one scalar per row ({tab.J}), got shape {l2.shape}")
    if np.any(~(l2 > 0)) or np.any(~np.isfinite(l2)):
        raise ValueError("row scalars must be positive and finite")
    return scale_rows(tab, 1.0 / l2)


def pair_costs(tabA: TabulatedMatrix, tabB: TabulatedMatrix) -> tuple[np.ndarray, np.ndarray]:
    """(cost, log λ) for every (A row, B row) pair."""
    if tabA.shape != tabB.shape:
        raise ValueError(f"dimension mismatch: {tabA.shape} vs {tabB.shape}")
    A, B = tabA.log_entries, tabB.log_entries
    n = A.shape[0]
    cost = np.empty((n, n))
    mid = np.empty((n, n))
    step = max(1, 2_000_000 // max(1, n * A.shape[1]))
    for s in range(0, n, step):
        D = A[s:s + step, None, :] - B[None, :, :]
        hi, lo = D.max(axis=2), D.min(axis=2)
        cost[s:s + step] = (hi - lo) / 2
        mid[s:s + step] = (hi + lo) / 2
    return cost, mid


def _has_perfect_matching(cost: np.ndarray, threshold: float) -> bool:
    graph = csr_matrix(cost <= threshold)
    return bool(np.all(maximum_bipartite_matching(graph, perm_type="column") >= 0))


def bottleneck_assignment(cost: np.ndarray) -> tuple[np.ndarray, float]:
    """Permutation minimizing the largest selected cost; ties broken by
    the smallest total cost among bottleneck-optimal assignments."""
    n = cost.shape[0]
    levels = np.unique(cost)
    lo, hi = 0, levels.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_perfect_matching(cost, levels[mid]):
            hi = mid
        else:
            lo = mid + 1
    t = levels[lo]
    restricted = np.where(cost <= t, cost, np.inf)
    rows, cols = linear_sum_assignment(restricted)
    sigma = np.empty(n, dtype=int)
    sigma[rows] = cols
    return sigma, float(t)


def match(tabA: TabulatedMatrix, tabB: TabulatedMatrix,
          max_distortion: float = DEFAULT_MAX_DISTORTION) -> MatchResult:
    cost, mid = pair_costs(tabA, tabB)
    sigma, _ = bottleneck_assignment(cost)
    idx = np.arange(cost.shape[0])
    log_lambda = mid[idx, sigma]
    distortion = float(cost[idx, sigma].max())
    if distortion <= EXACT_TOL:
        status = "exact"
    elif distortion <= max_distortion:
        status = "approximate"
    else:
        status = "failed"
    return MatchResult(sigma, log_lambda, distortion, status)


def _check_sigma(sigma, n: int) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=int)
    if sigma.shape != (n,) or not np.array_equal(np.sort(sigma), np.arange(n)):
        raise ValueError("sigma must be a bijection of 0..n-1")
    return sigma


def verify_quasi_equivalence(tabA: TabulatedMatrix, tabB: TabulatedMatrix, sigma, lambdas=None,
                             C: float = 1.0, log_lambda=None) -> bool:
    """True iff ``a_{j,q}/C <= λ_j b_{sigma[j],q} <= C a_{j,q}`` for all j, q.

    Same-column check only; shifted grades are the business of
    ``matrix_calculus.dominated_by`` on the permuted and scaled matrices.
    """
    if tabA.shape != tabB.shape:
        raise ValueError(f"dimension mismatch: {tabA.shape} vs {tabB.shape}")
    sigma = _check_sigma(sigma, tabA.J)
    if log_lambda is None:
        lam = np.asarray(lambdas, dtype=float)
        if np.any(~(lam > 0)):
            raise ValueError("scalars must be positive")
        log_lambda = np.log(lam)
    log_lambda = np.asarray(log_lambda, dtype=float)
    if C < 1:
        return False
    dev = np.abs(tabA.log_entries - log_lambda[:, None] - tabB.log_entries[sigma])
    return bool(np.all(dev <= np.log(C) + 1e-12 * np.maximum(1.0, np.abs(tabA.log_entries))))


def finite_square_witness(tab: TabulatedMatrix, tol: float = 1e-12) -> dict:
    """Check A ≺ A² with (r = q, C = 1) and A² ≺ A with (r = 2q, C = 1) on the grid.

    The first needs entries >= 1; the second holds for normalized profiles
    of orthonormal families by Cauchy-Schwarz.  Grades with 2q >= Q are
    skipped.
    """
    L = tab.log_entries
    forward = bool(np.all(L >= -tol))
    worst = -np.inf
    for q in range(tab.Q):
        if 2 * q < tab.Q:
            worst = max(worst, float(np.max(2 * L[:, q] - L[:, 2 * q])))
    backward = worst <= tol
    return {"forward": forward, "backward": backward, "ok": forward and backward,
            "min_log_entry": float(L.min()), "max_log_excess": worst}


@dataclass(frozen=True, eq=False)
class PlantedInstance:
    A: TabulatedMatrix
    B: TabulatedMatrix
    sigma: np.ndarray
    log_lambda: np.ndarray

    def plant_json(self) -> dict:
        return {"sigma": self.sigma.tolist(), "log_lambda": self.log_lambda.tolist()}


def random_monotone_rows(n: int, Q: int, rng: np.random.Generator, min_separation: float = 1e-6,
                         max_tries: int = 100) -> np.ndarray:
    """Log rows built from positive increments, rejecting samples whose
    closest pair of rows has scale-invariant cost below ``min_separation``."""
    for _ in range(max_tries):
        inc = rng.uniform(0.05, 2.0, size=(n, Q - 1))
        rows = np.hstack([rng.uniform(0, 5, size=(n, 1)), inc]).cumsum(axis=1)
        if n < 2 or Q < 2:
            return rows
        tab = TabulatedMatrix.from_log(rows)
        cost, _ = pair_costs(tab, tab)
        np.fill_diagonal(cost, np.inf)
        if cost.min() >= min_separation:
            return rows
    raise RuntimeError("could not draw separated rows")


def planted_instance(n: int, Q: int, seed: int, min_separation: float = 1e-6) -> PlantedInstance:
    """A random A and B with ``b_{sigma[j],q} = a_{j,q} / λ_j``."""
    rng = np.random.default_rng(seed)
    A = random_monotone_rows(n, Q, rng, min_separation)
    sigma = rng.permutation(n)
    log_lambda = rng.uniform(-3, 3, size=n)
    B = np.empty_like(A)
    B[sigma] = A - log_lambda[:, None]
    return PlantedInstance(TabulatedMatrix.from_log(A, "constructed", "planted_A"),
                           TabulatedMatrix.from_log(B, "constructed", "planted_B"), sigma, log_lambda)


__all__ = [
    "DEFAULT_MAX_DISTORTION", "EXACT_TOL", "MatchResult", "PlantedInstance", "bottleneck_assignment",
    "finite_square_witness", "match", "normalize_profile", "pair_costs", "planted_instance",
    "random_monotone_rows", "verify_quasi_equivalence",
]
