import csv
import io
import json
import subprocess
import sys

import pytest

from se3ad.cli import main

QUICK = ["--repeats", "3", "--warmup", "0"]


def test_bench_json(tmp_path):
    out = tmp_path / "r.json"
    assert main(["bench", "--rows", "5,7", "--format", "json", "--out", str(out), *QUICK]) == 0
    data = json.loads(out.read_text())
    assert [r["row_id"] for r in data["rows"]] == [5, 7]
    assert len(data["oracle_hessian"]) == 36


def test_bench_csv_stdout(capsys):
    assert main(["bench", "--rows", "6-7", "--format", "csv", "--seed", "3", "--landmarks", "4", *QUICK]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [r["row_id"] for r in rows] == ["6", "7"]


def test_bench_table(capsys):
    assert main(["bench", "--rows", "1,7", *QUICK]) == 0
    out = capsys.readouterr().out
    assert "seed=42" in out and "landmarks=5" in out


def test_bench_config_file_with_overrides(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"seed": 5, "n_landmarks": 3, "kappa": 2.0}))
    assert main(["bench", "--config", str(cfg), "--seed", "6", "--rows", "7", "--format", "json", *QUICK]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["config"]["seed"] == 6
    assert data["config"]["n_landmarks"] == 3 and data["config"]["kappa"] == 2.0


def test_bench_backend_choice(capsys):
    assert main(["bench", "--rows", "7", "--backend", "python", "--format", "json", *QUICK]) == 0
    assert json.loads(capsys.readouterr().out)["config"]["backend"] == "python"


def test_bad_rows_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["bench", "--rows", "9"])
    assert info.value.code == 2


def test_bad_config_returns_2(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert main(["bench", "--config", str(cfg)]) == 2
    assert "unknown config keys" in capsys.readouterr().err
    assert main(["bench", "--config", str(tmp_path / "missing.json")]) == 2


@pytest.mark.parametrize("suite", ["basis", "so3", "se3", "nll"])
def test_verify_suites_pass(suite, capsys):
    assert main(["verify", "--suite", suite]) == 0
    out = capsys.readouterr().out
    assert f"[{suite}]" in out and "all checks passed" in out


def test_verify_failure_exit_code(monkeypatch, capsys):
    import se3ad.verify as verify
    from se3ad.verify import Check

    monkeypatch.setitem(verify.SUITES, "basis", lambda: [Check("broken", 1.0, 1e-3)])
    assert main(["verify", "--suite", "basis"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "se3ad", "verify", "--suite", "basis"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
