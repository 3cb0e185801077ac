import csv
import json
import subprocess
import sys

import pytest

from kgff.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, dispatch


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# config: ")
    return json.loads(lines[0][len("# config: "):]), list(csv.DictReader(lines[1:]))


def test_verify_prop1(tmp_path):
    rc = dispatch(["verify-prop1", "--p", "2", "--m", "2", "--Q", "1",
                   "--psi", "linear:0,2", "--out", str(tmp_path)])
    assert rc == EXIT_OK
    rep = json.loads((tmp_path / "prop1.json").read_text())
    assert rep["failed"] == 0 and rep["passed"] == 15
    assert rep["cases"][0]["expected"] == "1/2^2"


def test_verify_prop2(tmp_path):
    rc = dispatch(["verify-prop2", "--m", "2", "--Q", "1", "--psi", "table:1,2",
                   "--out", str(tmp_path)])
    assert rc == EXIT_OK
    rep = json.loads((tmp_path / "prop2.json").read_text())
    assert rep["failed"] == 0 and rep["dependent_count"] > 0


def test_counts_and_phi(tmp_path):
    assert dispatch(["counts", "--Q", "3", "--out", str(tmp_path)]) == EXIT_OK
    cfg, rows = read_csv(tmp_path / "counts.csv")
    assert cfg["k"] == 2
    assert [int(r["exact_count"]) for r in rows] == [3, 12, 48, 192]
    assert {(r["ratio_num"], r["ratio_den"]) for r in rows} == {("4", "3")}
    assert dispatch(["phi", "--Q", "1", "--out", str(tmp_path)]) == EXIT_OK
    _, rows = read_csv(tmp_path / "phi.csv")
    assert (rows[1]["phi_exact_num"], rows[1]["phi_exact_den"]) == ("9", "2")
    assert (rows[1]["phi_paper_num"], rows[1]["phi_paper_den"]) == ("6", "1")


def test_expected_n(tmp_path):
    assert dispatch(["expected-n", "--Q", "1", "--out", str(tmp_path)]) == EXIT_OK
    rep = json.loads((tmp_path / "expected_n.json").read_text())
    row = rep["rows"][0]
    assert row["expected_N"] == "9/2^1" and row["equals_phi_exact"] and not row["equals_phi_paper"]


def test_t_ratio(tmp_path):
    args = ["t-ratio", "--psi", "linear:2,1", "--Q", "5", "--out", str(tmp_path)]
    assert dispatch(args) == EXIT_OK
    _, rows = read_csv(tmp_path / "t_ratio.csv")
    assert len(rows) == 6 and all(float(r["ratio"]) <= 4 for r in rows)
    assert dispatch(args + ["--bound", "1.2"]) == EXIT_FAIL


def test_run_outputs_and_determinism(tmp_path):
    base = ["run", "--psi", "linear:2,1", "--Q", "5", "--samples", "30", "--seed", "3"]
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    assert dispatch(base + ["--out", str(a)]) == EXIT_OK
    assert dispatch(base + ["--out", str(b), "--threads", "1"]) == EXIT_OK
    assert dispatch(base + ["--out", str(c), "--backend", "numpy", "--orbits"]) == EXIT_OK
    ra = (a / "runs.csv").read_bytes()
    assert ra == (b / "runs.csv").read_bytes()
    # config line records the orbit flag, the data rows must agree
    assert ra.split(b"\n", 1)[1] == (c / "runs.csv").read_bytes().split(b"\n", 1)[1]
    summ = json.loads((a / "summary.json").read_text())
    assert summ["config"]["samples"] == 30 and len(summ["stats"]["per_Q"]) == 6


@pytest.mark.parametrize("argv", [
    ["counts", "--p", "4"],
    ["counts", "--m", "0"],
    ["phi", "--psi", "linear:1"],
    ["phi", "--psi", "linear:0,0"],
    ["run", "--threads", "0"],
    ["t-ratio", "--Q", "20", "--budget", "100"],
    ["nope"],
    ["counts", "--backend", "gpu"],
])
def test_usage_errors(argv, tmp_path, capsys):
    assert dispatch(argv + ["--out", str(tmp_path)]) == EXIT_USAGE


def test_extension_field(tmp_path):
    rc = dispatch(["verify-prop1", "--p", "2", "--l", "2", "--modulus", "1,1,1", "--m", "2",
                   "--Q", "0", "--out", str(tmp_path)])
    assert rc == EXIT_OK
    assert dispatch(["counts", "--p", "2", "--l", "2", "--modulus", "1,0,1",
                     "--out", str(tmp_path)]) == EXIT_USAGE


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "kgff", "phi", "--Q", "1", "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "phi.csv").exists()
    proc = subprocess.run([sys.executable, "-m", "kgff", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "verify-prop1" in proc.stdout
