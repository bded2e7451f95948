from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from alc.cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, build_parser, build_report, run


def run_capture(capsys, argv):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classical_json(capsys):
    code, out, _ = run_capture(capsys, ["classical", "search", "--format", "json"])
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["optimum"] == "13/16"
    assert d["reference_is_maximizer"]


def test_table3_verbatim_reports_mismatch(capsys):
    code, out, err = run_capture(capsys, ["squarebit", "table3", "--check", "--format", "json"])
    d = json.loads(out)
    assert code == EXIT_MISMATCH
    assert d["check"]["matched"] == 507
    assert d["check"]["invalid_flagged"] == 16
    assert d["check"]["invalid_match_shaded"]


def test_table3_errata_check_passes(capsys):
    code, out, _ = run_capture(capsys, ["squarebit", "table3", "--check", "--errata", "--format", "json"])
    assert code == EXIT_OK
    assert json.loads(out)["check"]["matched"] == 576


def test_table3_csv_layout(capsys):
    code, out, _ = run_capture(capsys, ["squarebit", "table3"])
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["state"] + [str(i) for i in range(24)]
    assert len(rows) == 25
    assert rows[19][17] == "-1/2"  # state 18, effect 16


def test_table4_and_table5(capsys):
    assert run_capture(capsys, ["squarebit", "table4", "--check", "--errata"])[0] == EXIT_OK
    assert run_capture(capsys, ["squarebit", "table4", "--check"])[0] == EXIT_MISMATCH
    code, out, _ = run_capture(capsys, ["squarebit", "table5", "--check", "--format", "pretty"])
    assert code == EXIT_OK
    assert "64/64" in out


def test_quantum_and_spekkens(capsys):
    code, out, _ = run_capture(capsys, ["quantum", "verify"])
    assert code == EXIT_OK
    assert abs(json.loads(out)["bell_protocol"]["overall"] - 1) <= 1e-12
    code, out, _ = run_capture(capsys, ["spekkens", "verify"])
    assert code == EXIT_OK
    assert json.loads(out)["success_M_prime"] == "1/1"


def test_seesaw_command(capsys):
    code, out, _ = run_capture(capsys, ["quantum", "seesaw", "--restarts", "3", "--iterations", "5"])
    assert code == EXIT_OK
    assert json.loads(out)["restarts"] == 3


def test_search_pretty(capsys):
    code, out, _ = run_capture(capsys, ["squarebit", "search", "--model", "frozen-17"])
    assert code == EXIT_OK
    assert "perfect: none" in out


def test_search_byte_identical(capsys, tmp_path):
    argv = ["squarebit", "search", "--model", "hybrid-b", "--format", "json", "--audit", "0.01", "--seed", "4"]
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    assert run(argv + ["--jobs", "1", "-o", str(p1)]) == EXIT_OK
    assert run(argv + ["--jobs", "2", "-o", str(p2)]) == EXIT_OK
    assert p1.read_bytes() == p2.read_bytes()
    d = json.loads(p1.read_text())
    assert d["audit"]["lp_certificate_failures"] == 0
    assert list(d) == sorted(d)


def test_search_one_bit_found(capsys):
    code, out, _ = run_capture(capsys, ["squarebit", "search", "--model", "classical-bit", "--n-strings", "2",
                                        "--families", "product", "--format", "json"])
    assert code == EXIT_OK
    assert json.loads(out)["perfect"] is not None


@pytest.mark.parametrize("argv", [
    [],
    ["squarebit"],
    ["squarebit", "table9"],
    ["squarebit", "search"],
    ["squarebit", "search", "--model", "frozen-30"],
    ["squarebit", "search", "--model", "pr", "--n-strings", "3"],
    ["quantum", "seesaw", "--restarts", "0"],
    ["classical", "search", "--bogus"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run_capture(capsys, argv)
    assert code == EXIT_USAGE
    assert "usage" in err


def test_help_exits_zero(capsys):
    assert run(["--help"]) == EXIT_OK


def test_jobs_env_default(monkeypatch):
    monkeypatch.setenv("ALC_JOBS", "3")
    args = build_parser().parse_args(["squarebit", "search", "--model", "hs"])
    assert args.jobs == 3


def test_report_without_searches():
    rep, ok = build_report(searches=False, errata=True)
    assert rep["properties"]["passed"]
    assert rep["checks"]["table3"]
    assert ok
    rep_v, ok_v = build_report(searches=False, errata=False)
    assert not rep_v["checks"]["table3"]
    assert not ok_v


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "alc.cli", "spekkens", "verify", "--format", "pretty"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "success with M: 1/1" in proc.stdout
