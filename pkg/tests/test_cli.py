"""Command line tests: help text, exit codes, and the gen/validate/
baseline/report flows on a tiny dataset."""

import json
from pathlib import Path

import pytest

from polargrid.cli import main

DATA = Path(__file__).parent / "data"


def test_help_matches_golden(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["--help"])
    assert exit_info.value.code == 0
    golden = (DATA / "cli_help.txt").read_text()
    assert capsys.readouterr().out == golden


def test_missing_command_exits_nonzero(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main([])
    assert exit_info.value.code != 0


def test_gen_validate_baseline_cycle(tmp_path, capsys):
    out = tmp_path / "ds"
    assert main(["gen", "--out", str(out), "--n-per-task", "1", "--tasks", "sudoku,maze"]) == 0
    assert (out / "manifest.jsonl").is_file()
    assert main(["validate", "--dataset", str(out)]) == 0
    captured = capsys.readouterr().out
    assert "0 failures" in captured
    assert main(["baseline", "--dataset", str(out), "--simulate", "5"]) == 0
    captured = capsys.readouterr().out
    assert "expected random baseline" in captured
    assert "simulated" in captured


def test_validate_catches_tampering(tmp_path, capsys):
    out = tmp_path / "ds"
    main(["gen", "--out", str(out), "--n-per-task", "1", "--tasks", "sudoku"])
    manifest = out / "manifest.jsonl"
    lines = [json.loads(l) for l in manifest.read_text().splitlines()]
    truth = lines[0]["ground_truth"]["value"]
    lines[0]["ground_truth"]["value"] = "A" if truth != "A" else "B"
    manifest.write_text("\n".join(json.dumps(l) for l in lines) + "\n")
    assert main(["validate", "--dataset", str(out)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_unknown_task_rejected(tmp_path):
    with pytest.raises(SystemExit):
        main(["gen", "--out", str(tmp_path / "x"), "--tasks", "chess"])


def test_errors_print_to_stderr(tmp_path, capsys):
    code = main(["validate", "--dataset", str(tmp_path / "missing")])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_report_from_saved_results(tmp_path, small_dataset_dir, small_records, capsys):
    results_path = tmp_path / "results.jsonl"
    rows = []
    for rec in small_records:
        rows.append(
            {
                "instance_id": rec.instance_id,
                "task_id": rec.task_id,
                "topology": rec.topology,
                "mode": "standard",
                "response": "Answer: A",
                "parsed": {"type": "option_label", "value": "A"},
                "correct": rec.topology == "cartesian",
                "coordinate_invoked": False,
                "grid_size_mention": "unmentioned",
                "meta": {},
            }
        )
    results_path.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
    out_dir = tmp_path / "report"
    code = main(
        [
            "report",
            "--results",
            str(results_path),
            "--dataset",
            str(small_dataset_dir),
            "--out",
            str(out_dir),
        ]
    )
    assert code == 0
    report = json.loads((out_dir / "report.json").read_text())
    assert report["overall"]["cartesian"] == 100.0
    assert report["overall"]["polar"] == 0.0
    assert report["overall"]["delta"] == 100.0
    assert "overall" in capsys.readouterr().out
