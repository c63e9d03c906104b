import json

import pytest

from deanonlab.cli import main
from deanonlab.harness import CSV_COLUMNS


def run_cli(args):
    return main(args)


def test_simulate_writes_csv(tmp_path, capsys):
    out = tmp_path / "run.csv"
    code = run_cli([
        "simulate", "--users", "16", "--groups", "128", "--p0", "0.5",
        "--edge-flip", "0.05", "--gm-flip", "0.1", "--prior", "uniform",
        "--epsilon", "0.2", "--steps", "3", "--trials", "20", "--seed", "3",
        "--strategy", "its", "--out", str(out), "--format", "csv",
    ])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 2


def test_simulate_stdout_json(capsys):
    code = run_cli([
        "simulate", "--users", "12", "--groups", "64", "--gm-flip", "0.1",
        "--epsilon", "auto", "--steps", "auto", "--trials", "10", "--seed", "1",
        "--format", "json",
    ])
    assert code == 0
    parsed = json.loads(capsys.readouterr().out)
    assert parsed[0]["m"] == 12 and parsed[0]["trials"] == 10
    assert parsed[0]["success_rate"] == 1.0


def test_simulate_uid_scan_alias(tmp_path):
    out = tmp_path / "scan.json"
    code = run_cli([
        "simulate", "--users", "30", "--groups", "4", "--strategy", "uid-scan",
        "--trials", "50", "--seed", "2", "--out", str(out), "--format", "json",
    ])
    assert code == 0
    parsed = json.loads(out.read_text())
    assert parsed[0]["strategy"] == "uid_scan"


def test_config_file_with_inline_override(tmp_path):
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps({
        "users": 16, "groups": 96, "gm_flip": 0.1, "epsilon": 0.25,
        "steps": 2, "trials": 5, "master_seed": 9,
    }))
    out = tmp_path / "out.csv"
    code = run_cli([
        "simulate", "--config", str(config_path), "--trials", "8",
        "--out", str(out), "--format", "csv",
    ])
    assert code == 0
    row = out.read_text().strip().splitlines()[1].split(",")
    assert row[CSV_COLUMNS.index("trials")] == "8"


def test_sweep_emits_one_row_per_point(tmp_path):
    out = tmp_path / "sweep.csv"
    code = run_cli([
        "sweep", "--users", "16", "--groups", "128", "--gm-flip", "0.1",
        "--epsilon", "0.2", "--steps", "3", "--trials", "10", "--seed", "4",
        "--axis", "zipf", "--points", "0,0.5,1.0",
        "--out", str(out), "--format", "csv",
    ])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 4
    assert [line.split(",")[5] for line in lines[1:]] == ["zipf:0.0", "zipf:0.5", "zipf:1.0"]


def test_bounds_prints_report_without_simulating(capsys):
    code = run_cli([
        "bounds", "--users", "256", "--groups", "8192", "--p0", "0.5",
        "--edge-flip", "0.05", "--gm-flip", "0.05", "--epsilon", "0.1",
        "--steps", "4",
    ])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["lower_converse"] == pytest.approx(14.6237, abs=1e-3)
    assert report["upper_finite"] > report["lower_converse"]
    assert "conditions_met" in report


def test_config_error_exits_nonzero(tmp_path, capsys):
    code = run_cli([
        "simulate", "--users", "16", "--groups", "64", "--p0", "1.5",
        "--trials", "5", "--seed", "1",
    ])
    assert code == 2
    assert "p0" in capsys.readouterr().err


def test_missing_required_size_exits_nonzero(capsys):
    code = run_cli(["simulate", "--groups", "64", "--trials", "5"])
    assert code == 2
    assert "users" in capsys.readouterr().err
