"""Hilbert-norm constructions on a finite exact sequence 0 -> E -> F -> G -> 0.

F is C^N, E is the column span of an orthonormal N x k matrix ``U`` and G is
modelled by the orthonormal complement ``W``, with quotient map
``q(x) = W* x``.  Norms on E and G are given by Gram matrices in the
coordinates of ``U`` and ``W``.  Every space here is finite dimensional, so
completions change nothing and none are performed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.linalg as sla

SQRT3 = math.sqrt(3.0)
DOMINATION_CONSTANT = 49.0
_PD_RTOL = 1e-12


def _hermitian(G, what: str) -> np.ndarray:
    G = np.asarray(G)
    G = G.astype(complex) if np.iscomplexobj(G) else G.astype(float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ValueError(f"{what}: Gram matrix must be square, got {G.shape}")
    if G.size == 0:
        return G
    scale = max(np.abs(G).max(), 1e-300)
    if np.abs(G - G.conj().T).max() > 1e-10 * scale:
        raise ValueError(f"{what}: Gram matrix is not Hermitian")
    return (G + G.conj().T) / 2


@dataclass(frozen=True, eq=False)
class HilbertNorm:
    """``||x||^2 = x* gram x``.  Semidefinite grams give seminorms."""

    gram: np.ndarray
    allow_semidefinite: bool = False

    def __post_init__(self):
        G = _hermitian(self.gram, "HilbertNorm")
        if G.shape[0] > 0:
            ev = np.linalg.eigvalsh(G)
            top = max(abs(ev[-1]), 1e-300)
            if self.allow_semidefinite:
                bad, kind = ev[0] < -_PD_RTOL * top, "positive semidefinite"
            else:
                bad, kind = ev[0] <= _PD_RTOL * top, "positive definite"
            if bad:
                raise ValueError(f"Gram matrix is not {kind} (smallest eigenvalue {ev[0]:.3e})")
        G.setflags(write=False)
        object.__setattr__(self, "gram", G)

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def __call__(self, x) -> np.ndarray | float:
        """Norm of one vector, or of each row of a 2-D array."""
        x = np.asarray(x)
        vals = np.einsum("...i,ij,...j->...", x.conj(), self.gram, x).real
        out = np.sqrt(np.maximum(vals, 0.0))
        return float(out) if out.ndim == 0 else out

    def __add__(self, other: "HilbertNorm") -> "HilbertNorm":
        """The norm (||.||_a^2 + ||.||_b^2)^(1/2)."""
        return HilbertNorm(self.gram + other.gram, self.allow_semidefinite and other.allow_semidefinite)

    def restrict(self, U) -> "HilbertNorm":
        U = np.asarray(U)
        return HilbertNorm(U.conj().T @ self.gram @ U, self.allow_semidefinite)

    def quotient(self, U, W) -> "HilbertNorm":
        """``g -> inf_y ||W g + U y||`` in W coordinates (Schur complement)."""
        U, W = np.asarray(U), np.asarray(W)
        A = U.conj().T @ self.gram @ U
        B = U.conj().T @ self.gram @ W
        C = W.conj().T @ self.gram @ W
        if A.shape[0] == 0:
            return HilbertNorm(C, True)
        return HilbertNorm(C - B.conj().T @ np.linalg.solve(A, B), True)

    def to_json_dict(self) -> dict:
        return {"gram_re": self.gram.real.tolist(), "gram_im": self.gram.imag.tolist()}


def parallelogram_residual(norm: HilbertNorm, n_pairs: int = 1000, seed: int = 0) -> float:
    """max relative defect of ||x+y||^2 + ||x-y||^2 = 2||x||^2 + 2||y||^2."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n_pairs, norm.dim))
    Y = rng.standard_normal((n_pairs, norm.dim))
    lhs = norm(X + Y) ** 2 + norm(X - Y) ** 2
    rhs = 2 * norm(X) ** 2 + 2 * norm(Y) ** 2
    return float(np.max(np.abs(lhs - rhs) / np.maximum(rhs, 1e-300)))


def generalized_extremes(A, B) -> tuple[float, float]:
    """(min, max) of x*Ax / x*Bx over x != 0, for B positive definite."""
    ev = sla.eigh(np.asarray(A), np.asarray(B), eigvals_only=True)
    return float(ev[0]), float(ev[-1])


# -- subspace model ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SubspaceModel:
    U: np.ndarray
    W: np.ndarray = field(default=None)

    def __post_init__(self):
        U = np.asarray(self.U)
        if U.ndim != 2 or U.shape[1] > U.shape[0] or U.shape[0] < 1:
            raise ValueError(f"subspace basis must be N x k with k <= N, got {U.shape}")
        if np.abs(U.conj().T @ U - np.eye(U.shape[1])).max(initial=0.0) > 1e-10:
            raise ValueError("subspace basis columns are not orthonormal")
        W = self.W
        if W is None:
            W = sla.null_space(U.conj().T) if U.shape[1] < U.shape[0] else np.zeros((U.shape[0], 0))
        W = np.asarray(W)
        if W.shape != (U.shape[0], U.shape[0] - U.shape[1]):
            raise ValueError("complement has the wrong shape")
        T = np.hstack([U, W])
        if np.abs(T.conj().T @ T - np.eye(T.shape[0])).max() > 1e-10:
            raise ValueError("complement is not an orthonormal complement of the subspace")
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "W", W)

    @property
    def N(self) -> int:
        return self.U.shape[0]

    @property
    def k(self) -> int:
        return self.U.shape[1]

    @property
    def T(self) -> np.ndarray:
        """Unitary change of basis [U W]."""
        return np.hstack([self.U, self.W])

    def include(self, z) -> np.ndarray:
        return np.asarray(z) @ self.U.T if np.ndim(z) == 2 else self.U @ np.asarray(z)

    def quotient(self, x) -> np.ndarray:
        x = np.asarray(x)
        return x @ self.W.conj() if x.ndim == 2 else self.W.conj().T @ x

    @classmethod
    def coordinate(cls, N: int, k: int) -> "SubspaceModel":
        """E spanned by the first k standard basis vectors."""
        eye = np.eye(N)
        return cls(eye[:, :k], eye[:, k:])

    @classmethod
    def random(cls, N: int, k: int, rng: np.random.Generator) -> "SubspaceModel":
        Q, _ = np.linalg.qr(rng.standard_normal((N, N)))
        return cls(Q[:, :k], Q[:, k:])

    def to_json_dict(self, ladder: dict | None = None) -> dict:
        out = {"dim": self.N, "subspace": self.U.T.real.tolist()}
        if ladder is not None:
            out["ladder"] = ladder
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "SubspaceModel":
        cols = np.asarray(data["subspace"], dtype=float)
        if cols.ndim != 2 or cols.shape[1] != int(data["dim"]):
            raise ValueError("'subspace' must list basis vectors of length dim")
        Q, R = np.linalg.qr(cols.T)
        if np.min(np.abs(np.diag(R))) < 1e-10:
            raise ValueError("subspace vectors are linearly dependent")
        return cls(Q)


def load_model(path) -> tuple[SubspaceModel, dict]:
    data = json.loads(Path(path).read_text())
    return SubspaceModel.from_json_dict(data), data.get("ladder", {})


# -- inf-convolution and extension ------------------------------------------

def _as_norm(n, dim: int, what: str, semidefinite: bool = False) -> HilbertNorm:
    if not isinstance(n, HilbertNorm):
        n = HilbertNorm(np.asarray(n), semidefinite)
    if n.dim != dim:
        raise ValueError(f"{what} acts on dimension {n.dim}, expected {dim}")
    return n


def inf_convolution_norm(model: SubspaceModel, normE, norm1, norm2) -> HilbertNorm:
    """``||x||_F^2 = inf_{z in E} (||z||_E^2 + ||x - z||^2)``, ``||.||^2 = ||.||_1^2 + ||.||_2^2``.

    The infimum is a positive-definite quadratic in z, eliminated in closed
    form: with ``M`` the Gram of ``||.||`` and ``S = G_E + U*MU``,
    ``G_F = M - M U S^{-1} U* M``.
    Requires ``||z||_E <= ||z||_1`` on E; ``norm1`` and ``norm2`` may be
    seminorms as long as their sum is a norm.
    """
    normE = _as_norm(normE, model.k, "normE")
    norm1 = _as_norm(norm1, model.N, "norm1", semidefinite=True)
    norm2 = _as_norm(norm2, model.N, "norm2", semidefinite=True)
    U = model.U
    gap = U.conj().T @ norm1.gram @ U - normE.gram
    if model.k:
        ev, vec = np.linalg.eigh(gap)
        if ev[0] < -1e-10 * max(1.0, np.abs(normE.gram).max()):
            z = vec[:, 0]
            raise ValueError(f"norm1 does not dominate normE on E: witness z = {np.round(z, 6).tolist()} "
                             f"has ||z||_1^2 - ||z||_E^2 = {ev[0]:.3e}")
    M = norm1.gram + norm2.gram
    try:
        HilbertNorm(M)
    except ValueError as exc:
        raise ValueError(f"norm1 + norm2 is singular: {exc}") from None
    S = normE.gram + U.conj().T @ M @ U
    MU = M @ U
    G = M - MU @ np.linalg.solve(S, MU.conj().T)
    return HilbertNorm(G)


@dataclass
class InfConvolutionReport:
    samples: int
    ratio_min: float
    ratio_max: float
    exact_ratio_min: float
    exact_ratio_max: float
    quotient_max: float
    exact_quotient_max: float
    violations: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        out = {k: v for k, v in self.__dict__.items()}
        out["passed"] = self.passed
        return out

    def raise_if_failed(self) -> None:
        if self.violations:
            raise AssertionError(f"inequality violated: {self.violations[0]}")


def verify_inf_convolution(normF: HilbertNorm, model: SubspaceModel, normE, normG,
                           n_samples: int = 1000, seed: int = 0, rtol: float = 1e-9) -> InfConvolutionReport:
    """Check, on E, ``||x||_F <= ||x||_E <= sqrt(3) ||x||_F`` and, on F,
    ``||q x||_G <= inf_{y in E} ||x - y||_F``.

    Ratios ``||x||_E / ||x||_F`` are sampled and also computed exactly as
    generalized eigenvalues.  The infimum over E is the Schur-complement
    quotient norm.
    """
    normE = _as_norm(normE, model.k, "normE")
    normG = _as_norm(normG, model.N - model.k, "normG")
    rng = np.random.default_rng(seed)
    violations: list[dict] = []

    FE = normF.restrict(model.U)
    if model.k:
        Z = rng.standard_normal((n_samples, model.k))
        ratio = normE(Z) / FE(Z)
        lo, hi = generalized_extremes(normE.gram, FE.gram)
        exact = (math.sqrt(max(lo, 0.0)), math.sqrt(hi))
        for i in np.nonzero(ratio < 1 - rtol)[0][:3]:
            violations.append({"inequality": "||x||_F <= ||x||_E", "x": model.include(Z[i]).tolist(),
                               "ratio": float(ratio[i])})
        for i in np.nonzero(ratio > SQRT3 * (1 + rtol))[0][:3]:
            violations.append({"inequality": "||x||_E <= sqrt(3) ||x||_F", "x": model.include(Z[i]).tolist(),
                               "ratio": float(ratio[i])})
        if exact[0] < 1 - rtol or exact[1] > SQRT3 * (1 + rtol):
            violations.append({"inequality": "exact ratio range", "range": list(exact)})
        r_min, r_max = float(ratio.min()), float(ratio.max())
    else:
        exact, r_min, r_max = (1.0, 1.0), 1.0, 1.0

    if model.N - model.k:
        X = rng.standard_normal((n_samples, model.N))
        quo = normF.quotient(model.U, model.W)
        g = model.quotient(X)
        q_ratio = normG(g) / np.maximum(quo(g), 1e-300)
        qmax_exact = generalized_extremes(normG.gram, quo.gram)[1]
        for i in np.nonzero(q_ratio > 1 + rtol)[0][:3]:
            violations.append({"inequality": "||qx||_G <= inf_y ||x-y||_F", "x": X[i].tolist(),
                               "ratio": float(q_ratio[i])})
        if qmax_exact > (1 + rtol) ** 2:
            violations.append({"inequality": "exact quotient bound", "ratio": math.sqrt(qmax_exact)})
        q_max, q_exact = float(q_ratio.max()), math.sqrt(max(qmax_exact, 0.0))
    else:
        q_max = q_exact = 0.0
    return InfConvolutionReport(n_samples, r_min, r_max, exact[0], exact[1], q_max, q_exact, violations)


def canonical_norms(model: SubspaceModel, normE, normG=None) -> tuple[HilbertNorm, HilbertNorm]:
    """Seminorms norm1 = normE on E and norm2 = normG on the quotient, each
    zero on the other part; with both identities their sum is Euclidean."""
    normE = _as_norm(normE, model.k, "normE")
    nG = model.N - model.k
    GG = np.eye(nG) if normG is None else _as_norm(normG, nG, "normG").gram
    U, W = model.U, model.W
    n1 = U @ normE.gram @ U.conj().T
    n2 = W @ GG @ W.conj().T
    return HilbertNorm(n1, allow_semidefinite=True), HilbertNorm(n2, allow_semidefinite=True)


def extend_hilbert_norm(model: SubspaceModel, normE, normF: HilbertNorm | None = None) -> HilbertNorm:
    """A Hilbert norm on F whose restriction to E is exactly ``normE``.

    ``||x||^2 = ||pi x||_E^2 + ||x||_G^2`` where ``pi`` is the
    ``normF``-orthogonal projection onto E (in E coordinates) and
    ``||x||_G = inf_{y in E} ||x - y||_F``.  Without ``normF`` the
    inf-convolution norm built from :func:`canonical_norms` is used.
    """
    normE = _as_norm(normE, model.k, "normE")
    if normF is None:
        normF = inf_convolution_norm(model, normE, *canonical_norms(model, normE))
    U = model.U
    GF = normF.gram
    if model.k == 0:
        return normF
    A = U.conj().T @ GF @ U
    Pi = np.linalg.solve(A, U.conj().T @ GF)
    quotient_part = GF - GF @ U @ Pi
    G = Pi.conj().T @ normE.gram @ Pi + quotient_part
    return HilbertNorm(G)


def restriction_error(norm: HilbertNorm, model: SubspaceModel, normE, n_samples: int = 1000,
                      seed: int = 0) -> float:
    """max relative deviation of ||x|| from ||x||_E over random unit x in E."""
    normE = _as_norm(normE, model.k, "normE")
    if model.k == 0:
        return 0.0
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n_samples, model.k))
    Z /= np.asarray(normE(Z))[:, None]
    got = norm(model.include(Z))
    return float(np.max(np.abs(got - 1.0)))


# -- ladders and the dominating extension -----------------------------------

class NormLadder:
    """Increasing Hilbert norms ``||x||_0 <= ||x||_1 <= ...``.

    Diagonal ladders (the default) use ``||x||_k = ||w^k * x||`` with base
    weights ``w = (1, 2, ..., dim)``; every level exists and log-convexity
    is exact.  Ladders from explicit Gram matrices are finite and their
    monotonicity and log-convexity are checked on random samples.
    """

    def __init__(self, dim: int, base=None, grams: Sequence | None = None, seed: int = 0):
        self.dim = dim
        self._grams = None
        if grams is not None:
            self._grams = [_as_norm(g, dim, f"ladder level {i}").gram for i, g in enumerate(grams)]
            if not self._grams:
                raise ValueError("ladder needs at least one level")
            self.base = None
            self._check_explicit(seed)
        else:
            b = np.arange(1, dim + 1, dtype=float) if base is None else np.asarray(base, dtype=float)
            if b.shape != (dim,) or np.any(b < 1):
                raise ValueError("base weights must be >= 1, one per coordinate")
            self.base = b

    @classmethod
    def diagonal(cls, dim: int, base=None) -> "NormLadder":
        return cls(dim, base=base)

    @property
    def is_diagonal(self) -> bool:
        return self._grams is None

    @property
    def levels(self) -> int | None:
        return None if self._grams is None else len(self._grams)

    def has_level(self, k: int) -> bool:
        return k >= 0 and (self._grams is None or k < len(self._grams))

    def weights(self, k: int) -> np.ndarray:
        if not self.is_diagonal:
            raise ValueError("explicit ladders have no weight vector")
        return self.base ** k

    def gram(self, k: int) -> np.ndarray:
        if not self.has_level(k):
            raise IndexError(f"ladder has no level {k}")
        return np.diag(self.weights(k) ** 2) if self.is_diagonal else self._grams[k]

    def norm(self, k: int) -> HilbertNorm:
        return HilbertNorm(self.gram(k))

    def factor(self, k: int) -> np.ndarray:
        """R with ||x||_k = ||R x||."""
        if self.is_diagonal:
            return np.diag(self.weights(k))
        return np.linalg.cholesky(self._grams[k]).conj().T

    def values(self, X, k: int) -> np.ndarray:
        X = np.asarray(X)
        if self.is_diagonal:
            return np.linalg.norm(X * self.weights(k), axis=-1)
        return np.linalg.norm(X @ self.factor(k).T, axis=-1)

    def log_convexity_defect(self, n_samples: int = 1000, seed: int = 0, levels: int = 6) -> float:
        """max over samples of ||x||_k^2 / (||x||_{k-1} ||x||_{k+1}) - 1."""
        rng = np.random.default_rng(seed)
        X = rng.standard_normal((n_samples, self.dim))
        top = levels if self.levels is None else self.levels - 1
        worst = -1.0
        for k in range(1, top):
            mid = self.values(X, k) ** 2
            worst = max(worst, float(np.max(mid / (self.values(X, k - 1) * self.values(X, k + 1)) - 1)))
        return worst

    def _check_explicit(self, seed: int) -> None:
        rng = np.random.default_rng(seed)
        X = rng.standard_normal((1000, self.dim))
        for k in range(1, len(self._grams)):
            if np.any(self.values(X, k - 1) > self.values(X, k) * (1 + 1e-12)):
                raise ValueError(f"ladder is not monotone at level {k}")
        if len(self._grams) > 2 and self.log_convexity_defect(seed=seed) > 1e-9:
            raise ValueError("ladder is not log-convex; interpolation precondition fails")

    def to_json_dict(self) -> dict:
        if self.is_diagonal:
            return {"levels": None, "weights": "j^k"}
        return {"levels": len(self._grams), "grams": [g.real.tolist() for g in self._grams]}


@dataclass
class DominationLevel:
    u: int
    w_level: int
    v_level: int
    c_W: float
    c_V: float
    observed: float
    worst_x: list = field(default_factory=list)


@dataclass
class DominatingExtensionReport:
    constant: float
    levels: list[DominationLevel]
    restriction_error: float
    samples: int

    @property
    def observed(self) -> float:
        return max((lv.observed for lv in self.levels), default=0.0)

    @property
    def passed(self) -> bool:
        return self.observed <= self.constant * (1 + 1e-6) and self.restriction_error <= 1e-10

    def to_json(self) -> dict:
        return {
            "constant": self.constant, "observed": self.observed, "passed": self.passed,
            "restriction_error": self.restriction_error, "samples": self.samples,
            "levels": [lv.__dict__ for lv in self.levels],
        }


class _BlockLadder:
    """F-ladder in [U W] coordinates: level k is ladderE_k (+) ladderG_k."""

    def __init__(self, ladderE: NormLadder, ladderG: NormLadder):
        self.E, self.G = ladderE, ladderG

    def has_level(self, k: int) -> bool:
        return self.E.has_level(k) and self.G.has_level(k)

    def values(self, Y: np.ndarray, k: int) -> np.ndarray:
        kE = self.E.dim
        return np.hypot(self.E.values(Y[:, :kE], k) if kE else 0.0,
                        self.G.values(Y[:, kE:], k) if self.G.dim else 0.0)

    def factor(self, k: int) -> np.ndarray:
        return sla.block_diag(self.E.factor(k), self.G.factor(k))


def _max_gen_eig(A: np.ndarray, R: np.ndarray) -> float:
    """λ_max(A, R*R) via the whitened matrix R^{-*} A R^{-1}."""
    Rinv = np.linalg.inv(R)
    M = Rinv.conj().T @ A @ Rinv
    return float(np.linalg.eigvalsh((M + M.conj().T) / 2)[-1])


def _samples(dim: int, rng: np.random.Generator, n: int, scales: Sequence[np.ndarray]) -> np.ndarray:
    """Gaussian vectors, basis vectors, pairs of basis vectors and vectors
    reweighted by powers of the supplied scales."""
    blocks = [rng.standard_normal((n, dim)), np.eye(dim)]
    if dim > 1:
        i, j = rng.integers(0, dim, size=(2, n // 4))
        P = np.zeros((n // 4, dim))
        P[np.arange(n // 4), i] += 1.0
        P[np.arange(n // 4), j] += rng.uniform(-1, 1, n // 4)
        blocks.append(P[np.any(P != 0, axis=1)])
    for s in scales:
        t = rng.uniform(-1.0, 0.0, size=(n // 4, 1))
        with np.errstate(over="ignore", under="ignore"):
            B = rng.standard_normal((n // 4, dim)) * np.abs(s)[None, :] ** t
        blocks.append(B[np.all(np.isfinite(B), axis=1)])
    return np.vstack(blocks)


def dominating_extension(model: SubspaceModel, ladderE: NormLadder, ladderG: NormLadder,
                         n_samples: int = 1000, seed: int = 0,
                         levels: int | None = None) -> tuple[HilbertNorm, DominatingExtensionReport]:
    """Extend level 0 of ``ladderE`` to a dominating Hilbert norm on F.

    ``||x||^2 = ||x||_F^2 + ||qx||_G^2`` with ``||.||_F`` the exact extension
    of ``ladderE``'s level 0 and ``||.||_G`` level 0 of ``ladderG``.  The
    F-ladder is the direct sum of the two ladders, so its restriction to E
    and its quotient on G reproduce them.  For each level u the pair
    ``W = c_W * level 3u`` and ``V = c_V * level 12u`` is chosen so that
    ``||.||_W >= ||.||_U``, ``||.||_W >= ||.||``, ``||.||_V >= ||.||_W``,
    ``||z||_U <= ||z||_E^(2/3) ||z||_W^(1/3)`` on E and
    ``||g||_W <= ||g||_G^(3/4) ||g||_V^(1/4)`` on G.  The report records the
    largest sampled ``||x||_U^2 / (||x|| ||x||_V)`` per level.
    """
    if ladderE.dim != model.k or ladderG.dim != model.N - model.k:
        raise ValueError("ladder dimensions do not match the model")
    for name, lad in (("ladderE", ladderE), ("ladderG", ladderG)):
        if lad.log_convexity_defect(seed=seed) > 1e-9:
            raise ValueError(f"{name} is not log-convex; interpolation precondition fails")
    rng = np.random.default_rng(seed)
    T = model.T
    GE0 = ladderE.gram(0)
    ext = extend_hilbert_norm(model, GE0)
    G_new_T = T.conj().T @ ext.gram @ T
    GG0 = ladderG.gram(0)
    G_new_T[model.k:, model.k:] += GG0
    new_norm = HilbertNorm(T @ G_new_T @ T.conj().T)
    R_new = np.linalg.cholesky((G_new_T + G_new_T.conj().T) / 2).conj().T

    F = _BlockLadder(ladderE, ladderG)
    if levels is None:
        levels = 6 if ladderE.is_diagonal and ladderG.is_diagonal else (min(ladderE.levels or 99,
                                                                           ladderG.levels or 99))
    out_levels = []
    for u in range(levels):
        wl, vl = 3 * u, 12 * u
        if not (F.has_level(u) and F.has_level(wl) and F.has_level(vl)):
            continue
        R_m, R_n = F.factor(wl), F.factor(vl)
        R_u = F.factor(u)
        c_W = max(1.0, math.sqrt(max(_max_gen_eig(R_u.conj().T @ R_u, R_m), 0.0)),
                  math.sqrt(max(_max_gen_eig(G_new_T, R_m), 0.0)))
        c_V = max(c_W ** 4, c_W * math.sqrt(max(_max_gen_eig(R_m.conj().T @ R_m, R_n), 0.0)))
        scales = [np.diag(R_u), np.diag(R_n)] if u else []
        Y = _samples(model.N, rng, n_samples, scales)
        nu = F.values(Y, u)
        nn = np.linalg.norm(Y @ R_new.T, axis=1)
        nv = c_V * F.values(Y, vl)
        ratio = nu ** 2 / (nn * nv)
        i = int(np.argmax(ratio))
        out_levels.append(DominationLevel(u, wl, vl, c_W, c_V, float(ratio[i]),
                                          (T @ Y[i]).real.tolist()))
    err = restriction_error(new_norm, model, GE0, n_samples, seed)
    return new_norm, DominatingExtensionReport(DOMINATION_CONSTANT, out_levels, err, n_samples)


# -- random instances ---------------------------------------------------------

def random_pd(n: int, rng: np.random.Generator, spread: float = 1.0) -> np.ndarray:
    A = rng.standard_normal((n, n))
    scale = np.exp(rng.uniform(-spread, spread))
    return scale * (A @ A.T / max(n, 1) + 0.1 * np.eye(n))


def random_psd(n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = rng.integers(0, n + 1) if rank is None else rank
    B = rng.standard_normal((n, rank))
    return np.exp(rng.uniform(-1, 1)) * (B @ B.T) / max(n, 1)


@dataclass
class InfConvolutionInstance:
    model: SubspaceModel
    normE: HilbertNorm
    normG: HilbertNorm
    norm1: HilbertNorm
    norm2: HilbertNorm


def random_inf_convolution_instance(N: int, k: int, rng: np.random.Generator) -> InfConvolutionInstance:
    """Random model with norms meeting the preconditions by construction:
    ``norm1 = U G_E U* + PSD + eps I`` and ``norm2 = W G_G W* + PSD``."""
    model = SubspaceModel.random(N, k, rng)
    GE = random_pd(k, rng)
    GG = random_pd(N - k, rng)
    U, W = model.U, model.W
    eps = 10 ** rng.uniform(-3, 0)
    n1 = U @ GE @ U.T + random_psd(N, rng) + eps * np.eye(N)
    n2 = W @ GG @ W.T + random_psd(N, rng)
    return InfConvolutionInstance(model, HilbertNorm(GE), HilbertNorm(GG), HilbertNorm(n1),
                                  HilbertNorm(n2, allow_semidefinite=True))


__all__ = [
    "DOMINATION_CONSTANT", "DominatingExtensionReport", "DominationLevel", "HilbertNorm",
    "InfConvolutionInstance", "InfConvolutionReport", "NormLadder", "SQRT3", "SubspaceModel",
    "canonical_norms", "dominating_extension", "extend_hilbert_norm", "generalized_extremes",
    "inf_convolution_norm", "load_model", "parallelogram_residual", "random_inf_convolution_instance",
    "random_pd", "random_psd", "restriction_error", "verify_inf_convolution",
]
