"""Finite sections of rapidly decreasing matrices.

Vectors and operators live on C^N with coordinates j = 1..N.  The graded
norms use the diagonal weights ``D_q = diag(j^q)``:

    |xi|_q = ||D_q xi||_2          ||x||_q = ||D_q x D_q||_2 (largest singular value)

A finite section is an honest operator on C^N; nothing here claims
anything about the untruncated tail.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .growth_dsl.tabulated import TabulatedMatrix
from .matrix_calculus.probe import DIVERGENCE_SLOPE, trend_slope
from .verdict import Verdict, Witness

ORTHO_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class FiniteOperator:
    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValueError(f"operator must be a nonempty square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("operator entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def adjoint(self) -> "FiniteOperator":
        return FiniteOperator(self.entries.conj().T)

    def __matmul__(self, other: "FiniteOperator") -> "FiniteOperator":
        return FiniteOperator(self.entries @ other.entries)

    def __sub__(self, other: "FiniteOperator") -> "FiniteOperator":
        return FiniteOperator(self.entries - other.entries)

    def apply(self, xi) -> np.ndarray:
        return self.entries @ np.asarray(xi)

    @classmethod
    def identity(cls, n: int) -> "FiniteOperator":
        return cls(np.eye(n))

    def to_json_dict(self) -> dict:
        return {"dim": self.dim, "re": self.entries.real.tolist(), "im": self.entries.imag.tolist()}

    @classmethod
    def from_json_dict(cls, data: dict) -> "FiniteOperator":
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data.get("im", np.zeros_like(re)), dtype=float)
        op = cls(re + 1j * im)
        if "dim" in data and int(data["dim"]) != op.dim:
            raise ValueError(f"declared dim {data['dim']} does not match entries ({op.dim})")
        return op

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict()) + "\n")

    @classmethod
    def load(cls, path) -> "FiniteOperator":
        return cls.from_json_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class GradedNormSystem:
    """Weights w_q(j) = j^q for j = 1..N and q = 0..Q-1."""

    N: int
    Q: int

    def __post_init__(self):
        if self.N < 1 or self.Q < 1:
            raise ValueError("need N >= 1 and Q >= 1")

    def _check(self, q: int) -> None:
        if not 0 <= q < self.Q:
            raise ValueError(f"grade {q} out of range 0..{self.Q - 1}")

    def weights(self, q: int) -> np.ndarray:
        self._check(q)
        return np.arange(1, self.N + 1, dtype=float) ** q

    def D(self, q: int) -> np.ndarray:
        return np.diag(self.weights(q))

    def vector_norm(self, xi, q: int) -> float:
        xi = np.asarray(xi)
        if xi.shape != (self.N,):
            raise ValueError(f"vector of length {xi.shape} does not match N = {self.N}")
        return float(np.linalg.norm(self.weights(q) * xi))

    def operator_norm(self, x: FiniteOperator, q: int) -> float:
        if x.dim != self.N:
            raise ValueError(f"operator dim {x.dim} does not match N = {self.N}")
        w = self.weights(q)
        return float(np.linalg.norm(w[:, None] * x.entries * w[None, :], 2))


def vector_norm(xi, q: int, Q: int | None = None) -> float:
    """|xi|_q; pass ``Q`` to enforce the grade range."""
    xi = np.asarray(xi)
    return GradedNormSystem(xi.shape[0], Q if Q is not None else q + 1).vector_norm(xi, q)


def operator_norm(x: FiniteOperator, q: int, Q: int | None = None) -> float:
    return GradedNormSystem(x.dim, Q if Q is not None else q + 1).operator_norm(x, q)


def rank_one(f) -> FiniteOperator:
    """xi -> <xi, f> f, a self-adjoint projection when ||f|| = 1."""
    f = np.asarray(f, dtype=complex)
    if f.ndim != 1 or not np.any(f != 0):
        raise ValueError("rank_one needs a nonzero vector")
    return FiniteOperator(np.outer(f, f.conj()))


@dataclass(frozen=True)
class ProjectionFamily:
    """Pairwise orthogonal self-adjoint projections, checked on construction."""

    members: tuple[FiniteOperator, ...]
    tolerance: float = ORTHO_TOL

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise ValueError("projection family is empty")
        for i, P in enumerate(members):
            A = P.entries
            if np.linalg.norm(A @ A - A, 2) > self.tolerance:
                raise ValueError(f"member {i} is not idempotent")
            if np.linalg.norm(A.conj().T - A, 2) > self.tolerance:
                raise ValueError(f"member {i} is not self-adjoint")
        for i in range(len(members)):
            for k in range(i + 1, len(members)):
                if np.linalg.norm(members[i].entries @ members[k].entries, 2) > self.tolerance:
                    raise ValueError(f"members {i} and {k} are not orthogonal")

    @classmethod
    def from_vectors(cls, vectors: Iterable, tolerance: float = ORTHO_TOL) -> "ProjectionFamily":
        return cls(tuple(rank_one(f) for f in vectors), tolerance)

    def __len__(self) -> int:
        return len(self.members)


def gram_schmidt_l2(vectors: Sequence, tol: float = ORTHO_TOL) -> list[np.ndarray]:
    """Orthonormalize in order; a second pass runs when orthogonality slips."""
    basis: list[np.ndarray] = []
    for idx, v in enumerate(vectors):
        v = np.asarray(v, dtype=complex).copy()
        scale = np.linalg.norm(v)
        if scale == 0:
            raise ValueError(f"vector {idx} is zero")
        for _ in range(2):
            for b in basis:
                v -= np.vdot(b, v) * b
            if not basis or max(abs(np.vdot(b, v)) for b in basis) <= tol * max(np.linalg.norm(v), tol):
                break
        nrm = np.linalg.norm(v)
        if nrm < tol * scale:
            raise ValueError(f"vector {idx} is linearly dependent on its predecessors "
                             f"(residual {nrm / scale:.2e})")
        basis.append(v / nrm)
    return basis


def _log_vector_profile(V: np.ndarray, Q: int) -> np.ndarray:
    # log |f|_q = 0.5 * log sum_j |f_j|^2 j^{2q}, computed without overflow
    N = V.shape[1]
    logj = np.log(np.arange(1, N + 1, dtype=float))
    with np.errstate(divide="ignore"):
        log_abs2 = np.log(np.abs(V) ** 2)
    out = np.empty((V.shape[0], Q))
    for q in range(Q):
        t = log_abs2 + 2 * q * logj[None, :]
        m = t.max(axis=1, keepdims=True)
        out[:, q] = 0.5 * (m[:, 0] + np.log(np.exp(t - m).sum(axis=1)))
    return out


def profile(family, Q: int) -> TabulatedMatrix:
    """Row j, column q: |f_j|_q for vectors, ||P_j||_q for operators."""
    if isinstance(family, ProjectionFamily):
        members = list(family.members)
    else:
        members = list(family)
    if not members:
        raise ValueError("profile of an empty family")
    if Q < 1:
        raise ValueError("need Q >= 1")
    if isinstance(members[0], FiniteOperator):
        system = GradedNormSystem(members[0].dim, Q)
        rows = [[system.operator_norm(P, q) for q in range(Q)] for P in members]
        tab = TabulatedMatrix.from_entries(rows, "operator-profile")
    else:
        V = np.asarray(members, dtype=complex)
        if V.ndim != 2:
            raise ValueError("family vectors must share one length")
        if np.any(~np.any(V != 0, axis=1)):
            raise ValueError("family contains a zero vector")
        tab = TabulatedMatrix.from_log(_log_vector_profile(V, Q), "operator-profile")
    return tab


def block_householder_family(n_blocks: int, seed: int = 0, per_block: int = 1) -> np.ndarray:
    """Orthonormal vectors supported on the dyadic blocks [2^k, 2^{k+1}).

    Each block contributes the leading ``per_block`` columns of a random
    Householder reflection.  Returns an array of shape
    (n_blocks * per_block, 2^n_blocks - 1), rows ordered by block; the first
    block (size one) yields a single vector regardless of ``per_block``.
    """
    if n_blocks < 1 or per_block < 1:
        raise ValueError("need n_blocks >= 1 and per_block >= 1")
    rng = np.random.default_rng(seed)
    N = 2 ** n_blocks - 1
    rows = []
    for k in range(n_blocks):
        lo, size = 2 ** k - 1, 2 ** k
        u = rng.standard_normal(size)
        u /= np.linalg.norm(u)
        H = np.eye(size) - 2 * np.outer(u, u)
        for c in range(min(per_block, size)):
            v = np.zeros(N)
            v[lo:lo + size] = H[:, c]
            rows.append(v)
    return np.array(rows)


def check_dominating_l2(tab: TabulatedMatrix, l2_row=None, n_samples: int = 100,
                        seed: int = 0) -> Verdict:
    """Per-q (r, C) with a_{j,q}^2 <= C a_{j,0} a_{j,r} on the grid.

    Column 0 stands in for the l2 norm unless ``l2_row`` is given.  For each
    q the smallest r whose ratio has a non-increasing trend is chosen, with
    C the grid maximum of the ratio.  The Cauchy-Schwarz consequence
    |xi|_q^2 <= C ||xi|| |xi|_r is then checked on random coefficient vectors.
    Proved needs every q <= (Q-1)//2 resolved.
    """
    if not tab.is_column_monotone():
        j, q = tab.first_monotonicity_violation()
        raise ValueError(f"grid is not column-monotone at j={j}, q={q}")
    L = tab.log_entries
    if l2_row is not None:
        l2 = np.asarray(l2_row, dtype=float)
        if l2.shape != (tab.J,) or np.any(~(l2 > 0)):
            raise ValueError("l2_row must hold one positive value per row")
        base = np.log(l2)
    else:
        base = L[:, 0]
    Q = tab.Q
    per_q: list[tuple[int, int, float]] = []
    for q in range(Q):
        for r in range(q, Q):
            lr = 2 * L[:, q] - base - L[:, r]
            if trend_slope(lr) <= DIVERGENCE_SLOPE:
                per_q.append((q, r, float(np.exp(lr.max()))))
                break
    resolved = {q for q, _, _ in per_q}
    required = (Q - 1) // 2

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        xi = rng.standard_normal(tab.J) + 1j * rng.standard_normal(tab.J)
        log_x2 = np.log(np.abs(xi) ** 2)
        lnorm0 = 0.5 * _logsumexp(log_x2 + 2 * base)
        for q, r, C in per_q:
            lhs = _logsumexp(log_x2 + 2 * L[:, q])
            rhs = np.log(C) + lnorm0 + 0.5 * _logsumexp(log_x2 + 2 * L[:, r])
            worst = max(worst, float(np.exp(lhs - rhs)))
    evidence = {"cauchy_schwarz_max_ratio": worst, "samples": n_samples,
                "unresolved": sorted(set(range(required + 1)) - resolved)}
    if worst > 1 + 1e-9:
        return Verdict.undecided(reason="Cauchy-Schwarz check failed", **evidence)
    if all(q in resolved for q in range(required + 1)):
        return Verdict.proved(Witness(p=0, per_q=tuple(per_q)), **evidence)
    return Verdict.undecided(reason="some grades have no bounded ratio within the grid", **evidence)


def _logsumexp(x: np.ndarray) -> float:
    m = float(np.max(x))
    return m + float(np.log(np.exp(x - m).sum()))


__all__ = [
    "FiniteOperator", "GradedNormSystem", "ORTHO_TOL", "ProjectionFamily", "block_householder_family",
    "check_dominating_l2", "gram_schmidt_l2", "operator_norm", "profile", "rank_one", "vector_norm",
]
