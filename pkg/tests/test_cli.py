import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from exotic_hecke import cli, lmfdb

DATA = Path(__file__).resolve().parents[1] / "src" / "exotic_hecke" / "data"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_predict_text(capsys):
    code, out, _ = run(capsys, "predict", "--type", "a4", "--d", "6")
    assert code == 0
    assert "Q(zeta_12)" in out and "conductor 12" in out


def test_predict_json(capsys):
    code, out, _ = run(capsys, "predict", "--type", "S4", "--d", "2", "--branch", "sgn_equal",
                       "--format", "json", "--no-timestamp")
    rep = json.loads(out)
    assert code == 0
    assert rep["suite"] == "predict" and set(rep) == {"suite", "checks"}
    (check,) = rep["checks"]
    assert set(check) == {"name", "status", "detail"}
    assert check["detail"]["field"] == "Q(sqrt(-2))" and check["detail"]["conductor"] == 8


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["predict", "--type", "A4"],
    ["predict", "--type", "A4", "--d", "3"],
    ["predict", "--type", "S4", "--d", "2"],
    ["verify", "everything"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_missing_file(capsys):
    code, _, err = run(capsys, "tables", "missing.jsonl")
    assert code == 3
    assert "missing.jsonl" in err


def test_malformed_fixture(capsys, tmp_path):
    p = tmp_path / "bad.jsonl"
    p.write_text("{not json\n")
    assert run(capsys, "classify", str(p))[0] == 3


def test_unwritable_output(capsys, tmp_path):
    code = run(capsys, "predict", "--type", "A4", "--d", "2", "-o", str(tmp_path / "no" / "such" / "x.json"))[0]
    assert code == 3


def test_fetch_unreachable(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr(lmfdb.time, "sleep", lambda s: None)
    code, _, err = run(capsys, "fetch", "--level-bound", "10", "--out", str(tmp_path),
                       "--base-url", "http://127.0.0.1:9/api/")
    assert code == 3
    assert "giving up" in err


def test_classify_bundled_and_corrupted(capsys):
    code, out, _ = run(capsys, "classify", "--format", "json", "--no-timestamp")
    rep = json.loads(out)
    assert code == 0
    statuses = {c["name"]: c["status"] for c in rep["checks"]}
    assert statuses["classify synthetic.dihedral.23"] == "skip"
    assert sum(s == "pass" for s in statuses.values()) == 7
    code, out, _ = run(capsys, "classify", str(DATA / "newforms_corrupted.jsonl"))
    assert code == 1
    assert "FAIL" in out


def test_verify_fast_suites(capsys):
    assert run(capsys, "verify", "lemma-bl")[0] == 0
    assert run(capsys, "verify", "squarefree-orders")[0] == 0
    code, out, _ = run(capsys, "verify", "densities", "--max-d", "20")
    assert code == 0 and "0 failed" in out


def test_verify_theorems_small(capsys):
    code, out, _ = run(capsys, "verify", "theorems", "--max-twist", "6", "--serial", "--format", "json",
                       "--no-timestamp")
    rep = json.loads(out)
    # coverage needs larger twists, so this run fails on that check alone
    failed = [c["name"] for c in rep["checks"] if c["status"] == "fail"]
    assert failed == ["coverage"] and code == 1


def test_tables_json_matches_text(capsys):
    meta = str(DATA / "metadata_exceptional.jsonl")
    code, text, _ = run(capsys, "tables", meta)
    _, js, _ = run(capsys, "tables", meta, "--format", "json", "--no-timestamp")
    assert code == 0
    rep = json.loads(js)
    row = next(c for c in rep["checks"] if c["name"] == "table S4k1")["detail"]
    assert 58 in row["columns"]
    assert "general level, Hecke field Q(zeta_d, sqrt-2)" in text


@pytest.mark.parametrize("argv", [
    ["classify"],
    ["verify", "densities", "--max-d", "12"],
    ["tables", str(DATA / "metadata_exceptional.jsonl")],
])
def test_json_reports_are_deterministic(capsys, tmp_path, argv):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, *argv, "--format", "json", "--no-timestamp", "-o", str(a))
    run(capsys, *argv, "--format", "json", "--no-timestamp", "-o", str(b))
    assert a.read_bytes() == b.read_bytes()
    run(capsys, *argv, "--format", "json", "-o", str(a))
    assert "timestamp" in json.loads(a.read_text())


@given(st.lists(st.sampled_from(["pass", "fail", "skip"]), max_size=6))
@settings(max_examples=50, suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_exit_code_contract(monkeypatch, capsys, statuses):
    """Exit 1 iff some check failed, whatever the mix of forced results."""
    checks = [cli._check(f"c{i}", None if s == "skip" else s == "pass") for i, s in enumerate(statuses)]
    monkeypatch.setattr(cli, "suite_squarefree", lambda args: checks)
    code, out, _ = run(capsys, "verify", "squarefree-orders", "--format", "json", "--no-timestamp")
    assert code == (1 if "fail" in statuses else 0)
    assert [c["status"] for c in json.loads(out)["checks"]] == statuses
