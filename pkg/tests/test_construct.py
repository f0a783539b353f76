import json
from pathlib import Path

import numpy as np
import pytest

from koethe_lab.construct import (KINDS, construct, orthonormal_realizations, power_series_alpha,
                                  power_series_grid, power_series_spec)
from koethe_lab.growth_dsl import evaluate, load_tabulated, parse_file


@pytest.mark.parametrize("alpha, j, expected", [
    ("j", 5, 5.0), ("log j", np.e, 1.0), ("j^(1/2)", 9, 3.0), ("j^2", 3, 9.0), ("log log j", np.e, np.log(2)),
])
def test_alpha_values(alpha, j, expected):
    _, fn = power_series_alpha(alpha)
    assert float(fn(j)) == pytest.approx(expected)


def test_alpha_rejects_unknown():
    with pytest.raises(ValueError, match="unsupported"):
        power_series_alpha("sin j")
    with pytest.raises(ValueError, match="tabulated"):
        power_series_spec("log log j")


def test_spec_and_grid_agree():
    spec = power_series_spec("j^(1/2)")
    grid = power_series_grid("j^(1/2)", 30, 4)
    assert np.exp(grid.log_entries[8, 3]) == pytest.approx(evaluate(spec, 9, 3))


@pytest.mark.parametrize("kind", KINDS)
def test_every_kind_writes_files(kind, tmp_path):
    c = construct(kind, tmp_path, J=32, N=16, blocks=5, n=12, write_profile=True)
    assert c.files and all(Path(p).exists() for p in c.files.values())
    for path in c.files.values():
        if path.endswith(".csv"):
            assert load_tabulated(path).Q == 8
        elif path.endswith(".kothe"):
            assert parse_file(path)[0].name == "power_series"
    assert all(v != "Refuted" for k, v in c.summary.items() if k.endswith("koethe"))


def test_planted_pair_plant_file(tmp_path):
    c = construct("planted-pair", tmp_path, n=10, seed=4)
    plant = json.loads(open(c.files["plant"]).read())
    assert sorted(plant["sigma"]) == list(range(10))


def test_loglog_is_grid_only(tmp_path):
    c = construct("power-series", tmp_path, alpha="log log j", J=100)
    assert set(c.files) == {"grid"} and c.summary["tabulated_only"]


def test_realizations_share_rows():
    A, B, shuffle = orthonormal_realizations(range(6, 10), 5, seed=1)
    assert A.shape == B.shape == (4, 5)
    # row i of B tracks row shuffle[i] of A within the window
    assert np.abs(B.log_entries - A.log_entries[shuffle]).max() < 5 * 0.01
