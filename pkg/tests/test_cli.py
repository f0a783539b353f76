import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from koethe_lab.cli import EXIT_INCONSISTENT, EXIT_INPUT, EXIT_OK, main
from koethe_lab.growth_dsl import load_tabulated
from koethe_lab.quasi_equiv import planted_instance

S_TEXT = "matrix s { log_entry: q * log(j) }\n"


@pytest.fixture
def s_file(tmp_path):
    p = tmp_path / "s.kothe"
    p.write_text(S_TEXT)
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_s(capsys, s_file):
    code, out, _ = run(capsys, "classify", s_file, "--probe", "J=10000", "Q=8")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert {v["state"] for v in rep["verdicts"].values()} == {"Proved"}
    assert rep["condition_sets"] == {"4": "Proved", "5": "Proved"}
    assert rep["consistency"] is True and rep["probe"]["J"] == 10000


def test_classify_is_deterministic(capsys, s_file):
    first = run(capsys, "classify", s_file, "--probe", "J=2000", "Q=6")[1]
    second = run(capsys, "classify", s_file, "--probe", "J=2000", "Q=6")[1]
    assert first == second


def test_classify_text_format(capsys, s_file):
    code, out, _ = run(capsys, "classify", s_file, "--format", "text")
    assert code == EXIT_OK and "condition_sets:" in out


def test_classify_writes_out_file(capsys, s_file, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "classify", s_file, "--out", target)
    assert code == EXIT_OK and out == ""
    assert json.loads(target.read_text())["matrix"] == "s"


def test_mislabelled_sequence_is_flagged(capsys, tmp_path):
    # declared to outgrow log j, but the samples are constant: the grid disagrees
    np.savetxt(tmp_path / "flat.csv", np.ones(20000))
    (tmp_path / "m.kothe").write_text(
        'matrix m { seq a class superlog values "flat.csv"; log_entry: q * seq(a) }\n')
    code, out, err = run(capsys, "classify", tmp_path / "m.kothe", "--probe", "J=10000", "Q=6")
    assert code == EXIT_INCONSISTENT
    assert "inconsistency" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "classify", "nope.kothe")
    assert code == EXIT_INPUT and "no such file" in err


def test_syntax_error_reports_line(capsys, tmp_path):
    bad = tmp_path / "bad.kothe"
    bad.write_text("matrix b {\n  log_entry: q * j^0\n}\n")
    code, _, err = run(capsys, "check", bad)
    assert code == EXIT_INPUT and "line 2" in err


def test_bad_probe_argument(capsys, s_file):
    assert run(capsys, "classify", s_file, "--probe", "J=ten")[0] == EXIT_INPUT
    assert run(capsys, "classify", s_file, "--probe", "X=3")[0] == EXIT_INPUT
    assert run(capsys, "classify", s_file, "--probe", "J=0")[0] == EXIT_INPUT


def test_non_koethe_input(capsys, tmp_path):
    p = tmp_path / "d.kothe"
    p.write_text("matrix d { log_entry: -q * log(j) }\n")
    code, out, _ = run(capsys, "check", p)
    assert code == EXIT_OK
    assert json.loads(out)["matrices"][0]["koethe"]["state"] == "Refuted"
    assert run(capsys, "classify", p)[0] == EXIT_INPUT


def test_construct_power_series(capsys, tmp_path):
    code, out, _ = run(capsys, "construct", "power-series", "--alpha", "j", "--truncate", 64, "--profile",
                       "--out", tmp_path)
    assert code == EXIT_OK
    files = json.loads(out)["files"]
    grid = load_tabulated(files["grid"])
    assert grid.shape == (64, 8)
    assert grid.log_entries[2, 2] == pytest.approx(6.0)
    assert Path(files["spec"]).read_text().startswith("matrix power_series")


def test_construct_then_classify_and_probe(capsys, tmp_path):
    run(capsys, "construct", "power-series", "--alpha", "j^(1/2)", "--out", tmp_path)
    code, out, _ = run(capsys, "classify", tmp_path / "power_series.kothe", "--probe", "J=5000", "Q=6")
    assert code == EXIT_OK and json.loads(out)["condition_sets"]["4"] == "Proved"
    run(capsys, "construct", "canonical-basis", "--N", 50, "--out", tmp_path)
    code, out, _ = run(capsys, "probe", tmp_path / "canonical_basis.csv")
    assert code == EXIT_OK and json.loads(out)["matrices"][0]["probe"]["Q"] == 8


def test_match_planted_files(capsys, tmp_path):
    inst = planted_instance(30, 8, 4)
    inst.A.to_csv(tmp_path / "a.csv")
    inst.B.to_csv(tmp_path / "b.csv")
    code, out, _ = run(capsys, "match", tmp_path / "a.csv", tmp_path / "b.csv")
    assert code == EXIT_OK
    res = json.loads(out)
    assert res["sigma"] == inst.sigma.tolist() and res["status"] == "exact"


def test_match_rejects_specs(capsys, s_file):
    assert run(capsys, "match", s_file, s_file)[0] == EXIT_INPUT


def test_normlab_suite(capsys):
    code, out, _ = run(capsys, "normlab", "--seed", 5, "--models", 10, "--samples", 200)
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["failures"] == 0
    assert rep["inf_convolution"]["worst_ratio"] <= rep["inf_convolution"]["bound"]
    assert rep["dominating_extension"]["observed"] <= 49


def test_thread_env_validation(capsys, s_file, monkeypatch):
    monkeypatch.setenv("KOETHE_LAB_THREADS", "two")
    assert run(capsys, "classify", s_file, s_file)[0] == EXIT_INPUT
    monkeypatch.setenv("KOETHE_LAB_THREADS", "2")
    code, out, _ = run(capsys, "classify", s_file, s_file)
    assert code == EXIT_OK and len(json.loads(out)["reports"]) == 2


def test_module_entry_point(s_file):
    proc = subprocess.run([sys.executable, "-m", "koethe_lab", "check", str(s_file)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["matrices"][0]["koethe"]["state"] == "Proved"
