"""Finite J x Q grids of positive entries, stored as natural logs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

PROVENANCES = ("evaluated-from-spec", "external-file", "operator-profile", "constructed")


@dataclass(frozen=True, eq=False)
class TabulatedMatrix:
    """Rows j = 1..J, columns q = 0..Q-1.

    The canonical data is ``log_entries``; ``entries`` exponentiates on
    demand.  Entries are strictly positive and finite in log space.
    """

    log_entries: np.ndarray
    provenance: str = "external-file"
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        arr = np.array(self.log_entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"grid must be a nonempty 2-D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("entries must be strictly positive and finite")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "log_entries", arr)

    @classmethod
    def from_entries(cls, entries, provenance: str = "external-file", name: str = "",
                     **meta) -> "TabulatedMatrix":
        arr = np.asarray(entries, dtype=float)
        if arr.ndim != 2 or np.any(~np.isfinite(arr)) or np.any(arr <= 0):
            raise ValueError("entries must be a 2-D grid of strictly positive finite reals")
        return cls(np.log(arr), provenance, name, meta)

    @classmethod
    def from_log(cls, log_entries, provenance: str = "external-file", name: str = "",
                 **meta) -> "TabulatedMatrix":
        return cls(np.asarray(log_entries, dtype=float), provenance, name, meta)

    @property
    def entries(self) -> np.ndarray:
        return np.exp(self.log_entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.log_entries.shape

    @property
    def J(self) -> int:
        return self.log_entries.shape[0]

    @property
    def Q(self) -> int:
        return self.log_entries.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TabulatedMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.log_entries, other.log_entries))

    def allclose(self, other: "TabulatedMatrix", rtol: float = 1e-12) -> bool:
        return self.shape == other.shape and bool(
            np.allclose(self.entries, other.entries, rtol=rtol, atol=0))

    def truncate(self, J: int | None = None, Q: int | None = None) -> "TabulatedMatrix":
        return TabulatedMatrix(self.log_entries[:J, :Q], self.provenance, self.name, dict(self.meta))

    def first_monotonicity_violation(self) -> tuple[int, int] | None:
        """(j, q) with a_{j,q} > a_{j,q+1}, 1-based j, or None."""
        bad = np.argwhere(np.diff(self.log_entries, axis=1) < 0)
        if bad.size == 0:
            return None
        row, col = bad[0]
        return int(row) + 1, int(col)

    def is_column_monotone(self) -> bool:
        return self.first_monotonicity_violation() is None

    # -- I/O --------------------------------------------------------------
    def to_csv(self, path) -> None:
        vals = self.entries
        if not np.all(np.isfinite(vals)):
            raise OverflowError("entries overflow float64; write JSON (log_rows) instead")
        lines = [",".join(repr(float(x)) for x in row) for row in vals]
        Path(path).write_text("\n".join(lines) + "\n")

    def to_json_dict(self) -> dict:
        vals = self.entries
        out: dict = {"provenance": self.provenance}
        if self.name:
            out["name"] = self.name
        if np.all(np.isfinite(vals)):
            out["rows"] = vals.tolist()
        else:
            out["log_rows"] = self.log_entries.tolist()
        return out

    def to_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=1, sort_keys=True) + "\n")

    @classmethod
    def from_json_dict(cls, data: dict) -> "TabulatedMatrix":
        prov = data.get("provenance", "external-file")
        name = data.get("name", "")
        if "log_rows" in data:
            return cls.from_log(data["log_rows"], prov, name)
        if "rows" not in data:
            raise ValueError("tabulated JSON needs 'rows' or 'log_rows'")
        return cls.from_entries(data["rows"], prov, name)


def load_tabulated(path) -> TabulatedMatrix:
    """Read a grid from CSV (row per j, column per q) or the JSON mirror."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return TabulatedMatrix.from_json_dict(json.loads(path.read_text()))
    arr = np.loadtxt(path, delimiter=",", ndmin=2)
    return TabulatedMatrix.from_entries(arr, "external-file", path.stem)


def permute(tab: TabulatedMatrix, sigma) -> TabulatedMatrix:
    """A_sigma: row j of the result is row sigma[j] of ``tab`` (0-based)."""
    sigma = np.asarray(sigma, dtype=int)
    if sigma.shape != (tab.J,) or not np.array_equal(np.sort(sigma), np.arange(tab.J)):
        raise ValueError("sigma must be a bijection of 0..J-1")
    return TabulatedMatrix(tab.log_entries[sigma], tab.provenance, tab.name, dict(tab.meta))


def scale_rows(tab: TabulatedMatrix, lambdas) -> TabulatedMatrix:
    """Multiply row j by lambdas[j] > 0."""
    lam = np.asarray(lambdas, dtype=float)
    if lam.shape != (tab.J,) or np.any(~(lam > 0)) or np.any(~np.isfinite(lam)):
        raise ValueError("scalars must be positive and finite, one per row")
    return TabulatedMatrix(tab.log_entries + np.log(lam)[:, None], tab.provenance, tab.name,
                           dict(tab.meta))


def square_tab(tab: TabulatedMatrix) -> TabulatedMatrix:
    return TabulatedMatrix(2 * tab.log_entries, tab.provenance, tab.name, dict(tab.meta))
