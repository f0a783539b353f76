"""Named example families: power series matrices, canonical and dyadic
orthonormal families, planted matching pairs, and two orthonormal
realizations of one power series profile."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .growth_dsl import (KoetheMatrixSpec, TabulatedMatrix, format_spec, parse_spec,
                         validate_koethe)
from .quasi_equiv import planted_instance
from .smooth_ops import block_householder_family, profile

KINDS = ("power-series", "canonical-basis", "block-householder", "planted-pair")

_POWER = re.compile(r"^j\s*\^\s*\(?\s*(\d+(?:/\d+)?|\d+\.\d+)\s*\)?$")


def power_series_alpha(alpha: str) -> tuple[str | None, callable]:
    """(DSL expression for alpha, or None if only tabulated; numeric alpha).

    Accepts ``j``, ``log j``, ``j^θ`` and ``log log j``; the last is taken as
    ``log(1 + log j)`` so that every entry is at least 1.
    """
    a = " ".join(alpha.strip().split())
    if a == "j":
        return "j", lambda j: np.asarray(j, dtype=float)
    if a in ("log j", "log(j)"):
        return "log(j)", lambda j: np.log(np.asarray(j, dtype=float))
    if a in ("log log j", "log(log(j))"):
        return None, lambda j: np.log1p(np.log(np.asarray(j, dtype=float)))
    m = _POWER.match(a)
    if m:
        theta = Fraction(m.group(1))
        if theta <= 0:
            raise ValueError("exponent must be positive")
        return f"j^({theta})", lambda j, t=float(theta): np.asarray(j, dtype=float) ** t
    raise ValueError(f"unsupported alpha {alpha!r}; use j, log j, j^θ or log log j")


def power_series_spec(alpha: str, name: str = "power_series") -> KoetheMatrixSpec:
    expr, _ = power_series_alpha(alpha)
    if expr is None:
        raise ValueError(f"alpha {alpha!r} is only available in tabulated form")
    return parse_spec(f"matrix {name} {{ log_entry: q * {expr} }}")


def power_series_grid(alpha: str, J: int, Q: int, name: str = "power_series") -> TabulatedMatrix:
    """log a_{j,q} = q * alpha_j on j = 1..J, q = 0..Q-1."""
    _, fn = power_series_alpha(alpha)
    a = fn(np.arange(1, J + 1))
    return TabulatedMatrix.from_log(np.outer(a, np.arange(Q, dtype=float)), "constructed", name,
                                    alpha=alpha)


def canonical_basis_profile(N: int, Q: int) -> TabulatedMatrix:
    tab = profile(list(np.eye(N)), Q)
    return TabulatedMatrix(tab.log_entries, "operator-profile", "canonical_basis")


@dataclass
class Construction:
    kind: str
    files: dict[str, str] = field(default_factory=dict)
    summary: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "files": dict(sorted(self.files.items())), "summary": self.summary}


def _write_grid(tab: TabulatedMatrix, stem: Path) -> str:
    try:
        path = stem.with_suffix(".csv")
        tab.to_csv(path)
    except OverflowError:
        path = stem.with_suffix(".json")
        tab.to_json(path)
    return str(path)


def construct(kind: str, out_dir, *, alpha: str = "j", J: int = 64, Q: int = 8, N: int = 64,
              blocks: int = 8, n: int = 100, seed: int = 0, write_profile: bool = False) -> Construction:
    """Write the files of one named family into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if min(J, Q, N, blocks, n) < 1:
        raise ValueError("size parameters must be positive")
    c = Construction(kind)
    if kind == "power-series":
        expr, _ = power_series_alpha(alpha)
        if expr is not None:
            spec = power_series_spec(alpha)
            path = out / "power_series.kothe"
            path.write_text(format_spec(spec))
            c.files["spec"] = str(path)
            c.summary["koethe"] = validate_koethe(spec).state.value
        if write_profile or expr is None:
            grid = power_series_grid(alpha, J, Q)
            c.files["grid"] = _write_grid(grid, out / "power_series_grid")
            c.summary["grid_koethe"] = validate_koethe(grid).state.value
        c.summary.update(alpha=alpha, J=J, Q=Q, tabulated_only=expr is None)
    elif kind == "canonical-basis":
        tab = canonical_basis_profile(N, Q)
        c.files["grid"] = _write_grid(tab, out / "canonical_basis")
        c.summary.update(N=N, Q=Q, grid_koethe=validate_koethe(tab).state.value)
    elif kind == "block-householder":
        vecs = block_householder_family(blocks, seed=seed)
        tab = profile(vecs, Q)
        vpath = out / "block_householder_vectors.json"
        vpath.write_text(json.dumps({"vectors": vecs.tolist()}) + "\n")
        c.files["vectors"] = str(vpath)
        c.files["grid"] = _write_grid(TabulatedMatrix(tab.log_entries, "operator-profile",
                                                      "block_householder"), out / "block_householder")
        c.summary.update(blocks=blocks, N=int(vecs.shape[1]), Q=Q, seed=seed,
                         grid_koethe=validate_koethe(tab).state.value)
    elif kind == "planted-pair":
        inst = planted_instance(n, Q, seed)
        c.files["a"] = _write_grid(inst.A, out / "planted_a")
        c.files["b"] = _write_grid(inst.B, out / "planted_b")
        ppath = out / "plant.json"
        ppath.write_text(json.dumps(inst.plant_json(), sort_keys=True) + "\n")
        c.files["plant"] = str(ppath)
        c.summary.update(n=n, Q=Q, seed=seed, a_koethe=validate_koethe(inst.A).state.value,
                         b_koethe=validate_koethe(inst.B).state.value)
    else:
        raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    return c


def orthonormal_realizations(rows: range, Q: int, seed: int = 0, window: float = 0.01,
                             ) -> tuple[TabulatedMatrix, TabulatedMatrix, np.ndarray]:
    """Two orthonormal-profile realizations of Λ_∞(α_j = j) rows.

    Realization A uses the basis vectors at index n_j = round(e^j), whose
    profile is n_j^q ≈ e^{qj}.  Realization B places random unit vectors on
    disjoint windows ``[n_j(1 - window), n_j(1 + window)]`` and shuffles
    them.  Returns (profile A, profile B, shuffle) with B row i built from
    row ``shuffle[i]`` of A.
    """
    rng = np.random.default_rng(seed)
    centers = np.array([int(round(np.exp(j))) for j in rows])
    N = int(np.ceil(centers.max() * (1 + window))) + 1
    logj = np.log(np.arange(1, N + 1, dtype=float))
    prof_a = np.outer(np.log(centers), np.arange(Q, dtype=float))
    shuffle = rng.permutation(len(centers))
    prof_b = np.empty_like(prof_a)
    for i, src in enumerate(shuffle):
        c = centers[src]
        lo, hi = max(1, int(np.floor(c * (1 - window)))), int(np.ceil(c * (1 + window)))
        v = rng.standard_normal(hi - lo + 1)
        v /= np.linalg.norm(v)
        la = np.log(v ** 2)
        for q in range(Q):
            t = la + 2 * q * logj[lo - 1:hi]
            m = t.max()
            prof_b[i, q] = 0.5 * (m + np.log(np.exp(t - m).sum()))
    return (TabulatedMatrix.from_log(prof_a, "operator-profile", "realization_a"),
            TabulatedMatrix.from_log(prof_b, "operator-profile", "realization_b"), shuffle)


__all__ = [
    "Construction", "KINDS", "canonical_basis_profile", "construct", "orthonormal_realizations",
    "power_series_alpha", "power_series_grid", "power_series_spec",
]
