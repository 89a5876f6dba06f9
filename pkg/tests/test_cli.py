import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from zxzcert.cli import RunManifest, main

GOLDEN = Path(__file__).parent / "golden"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "zxzcert", "thresholds", "--max-measured", "3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "measured_qubits,threshold_z_exact,threshold_z"
    assert len(proc.stdout.splitlines()) == 4


def test_thresholds(capsys):
    code, out, _ = run_cli(capsys, "thresholds", "--max-measured", "20")
    assert code == 0
    assert out == (GOLDEN / "thresholds.csv").read_text()
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["threshold_z_exact"] == "2/3"
    assert rows[4]["threshold_z_exact"] == "6/7"
    assert float(rows[4]["threshold_z"]) == pytest.approx(0.857142857143)
    assert rows[19]["threshold_z_exact"] == "21/22"
    code, out, _ = run_cli(capsys, "thresholds", "--max-measured", "2", "--format", "json")
    assert json.loads(out)["rows"][1]["threshold_z"] == 0.75


def test_wc_verify(capsys):
    code, out, _ = run_cli(capsys, "wc-verify", "--n", "4", "--z", "1")
    assert code == 0
    rep = json.loads(out)
    assert rep["lambda"] == 1
    assert rep["stabilizer_count"] == 16
    assert rep["max_backbone_deviation"] < 1e-12
    assert rep["fidelity"] == pytest.approx(1)
    code, out, _ = run_cli(capsys, "wc-verify", "--n", "6", "--z", "0.9")
    rep = json.loads(out)
    assert rep["lambda"] == pytest.approx(0.7)
    assert rep["fidelity_deviation"] < 1e-12


def test_domain_error_exit_code(capsys):
    code, _, err = run_cli(capsys, "wc-verify", "--n", "10", "--z", "0.7")
    assert code == 2
    assert "zxzcert" in err


def test_compare_matches_golden(capsys):
    code, out, _ = run_cli(capsys, "compare", "--p-min", "0", "--p-max", "0.15", "--steps", "31", "--max-span", "30")
    assert code == 0
    assert out == (GOLDEN / "compare.csv").read_text()
    _, out, _ = run_cli(capsys, "compare", "--steps", "3", "--format", "json")
    data = json.loads(out)
    golden = json.loads((GOLDEN / "crossing_points.json").read_text())
    assert data["crossing_points"]["zxz"] == pytest.approx(golden["zxz"], abs=1e-11)
    assert len(data["rows"]) == 3


def test_plan(capsys):
    code, out, _ = run_cli(capsys, "plan", "--eta", "0.01", "--epsilon", "0.01", "--delta", "0.01")
    assert code == 0
    data = json.loads(out)
    assert data["complete_triples"] == 26492
    assert data["windows"] == 26492000000


def test_estimate(capsys):
    code, out, _ = run_cli(capsys, "estimate", "--p", "0", "--eta", "1", "--windows", "10000", "--spans", "1,5")
    assert code == 0
    data = json.loads(out)
    est = data["estimate"]
    assert est["mean"] == 1
    assert est["n_complete"] == 10000
    assert est["ci_low"] == pytest.approx(0.967447527386, abs=1e-12)
    assert [r["span"] for r in data["reports"]] == [1, 5]


def test_estimate_at_planned_windows(capsys):
    _, out, _ = run_cli(capsys, "plan", "--eta", "0.05", "--epsilon", "0.01")
    windows = json.loads(out)["windows"]
    code, out, _ = run_cli(capsys, "estimate", "--p", "0.02", "--eta", "0.05", "--windows", str(windows), "--spans", "1")
    assert code == 0
    data = json.loads(out)
    assert data["estimate"]["n_complete"] >= 26000
    assert data["reports"][0]["le_floor"] > 0


def test_estimate_insufficient_data(capsys):
    code, _, err = run_cli(capsys, "estimate", "--p", "0.01", "--eta", "0.01", "--windows", "1000")
    assert code == 3
    assert "insufficient" in err


def test_localize_small(capsys):
    code, out, _ = run_cli(capsys, "localize", "--n", "4", "--lambda", "0.8,1", "--restarts", "2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["lambda"]) for r in rows] == [0.8, 1.0]
    assert float(rows[0]["best_value"]) == pytest.approx(0.6, abs=1e-6)
    assert float(rows[1]["best_value"]) == pytest.approx(1, abs=1e-6)


def test_manifest_and_replay(tmp_path, capsys):
    out = tmp_path / "est.json"
    argv = ["estimate", "--p", "0.03", "--eta", "0.8", "--windows", "5000", "--seed", "7", "--out", str(out)]
    assert main(argv) == 0
    manifest = RunManifest.from_json((tmp_path / "est.json.manifest.json").read_text())
    assert manifest.command == "estimate"
    assert manifest.seed == 7
    assert manifest.parameters["windows"] == 5000
    first = out.read_text()

    again = tmp_path / "again.json"
    assert main(["replay", str(tmp_path / "est.json.manifest.json"), "--out", str(again)]) == 0
    assert again.read_text() == first
    assert "matches" in capsys.readouterr().err

    # a second run with the same seed is byte-identical
    assert main(argv) == 0
    assert out.read_text() == first


def test_replay_detects_tampering(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert main(["thresholds", "--max-measured", "4", "--out", str(out)]) == 0
    path = tmp_path / "t.csv.manifest.json"
    data = json.loads(path.read_text())
    data["checksums"]["output"] = "0" * 64
    path.write_text(json.dumps(data))
    assert main(["replay", str(path)]) == 1
    assert "DIFFERS" in capsys.readouterr().err
