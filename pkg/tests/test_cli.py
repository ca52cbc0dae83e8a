"""CLI driver: exit codes, report determinism, cache behavior, golden report."""

import json
from pathlib import Path

from quatheta.cli import RunConfig, main, run, report_body

GOLDEN = Path(__file__).parent / "golden"


def test_run_eleven_matches_golden():
    got = report_body(run(RunConfig(d=1, p=11, bound=12)))
    want = json.loads((GOLDEN / "q11_b12.json").read_text())
    assert got == want


def test_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    rc = main(["--field", "1", "--prime", "11", "--bound", "12", "--out", str(out)])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["classes"]["count"] == 2
    assert report["span"]["rank"] == 1
    assert report["all_checks_pass"] is True


def test_exit_code_ramified(capsys):
    rc = main(["--field", "5", "--prime", "5", "--bound", "8"])
    assert rc == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["error"] == "RamifiedPrime"


def test_exit_code_level_one_impossible(capsys):
    rc = main(["--field", "5", "--prime", "11", "--mode", "level_one", "--bound", "8"])
    assert rc == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["error"] == "LevelOneImpossible"


def test_cache_cold_then_warm_identical(tmp_path):
    cfg = dict(d=1, p=11, bound=10, cache_dir=str(tmp_path))
    a = report_body(run(RunConfig(**cfg)))
    assert list(tmp_path.glob("classes_*.json"))
    b = report_body(run(RunConfig(**cfg)))
    assert json.dumps(a) == json.dumps(b)


def test_cache_corruption_ignored(tmp_path, capsys):
    cfg = dict(d=1, p=11, bound=10, cache_dir=str(tmp_path))
    a = report_body(run(RunConfig(**cfg)))
    for f in tmp_path.glob("classes_*.json"):
        f.write_text("{broken json")
    b = report_body(run(RunConfig(**cfg)))
    assert json.dumps(a) == json.dumps(b)
    assert "corrupted" in capsys.readouterr().err


def test_no_cache_flag(tmp_path):
    cfg = RunConfig(d=1, p=11, bound=10, cache_dir=str(tmp_path), use_cache=False)
    run(cfg)
    assert not list(tmp_path.glob("classes_*.json"))


def test_schema_bump_invalidates(tmp_path):
    cfg = dict(d=1, p=11, bound=10, cache_dir=str(tmp_path))
    run(RunConfig(**cfg))
    for f in tmp_path.glob("classes_*.json"):
        payload = json.loads(f.read_text())
        payload["schema"] = 999
        f.write_text(json.dumps(payload))
    b = report_body(run(RunConfig(**cfg)))  # falls back to recomputation
    assert b["classes"]["count"] == 2


def test_worker_counts_do_not_change_body():
    a = report_body(run(RunConfig(d=1, p=11, bound=12, workers=1)))
    b = report_body(run(RunConfig(d=1, p=11, bound=12, workers=8)))
    assert json.dumps(a) == json.dumps(b)


def test_explicit_flags():
    r = run(RunConfig(d=1, p=11, bound=12, aux_prime=3, hecke_primes=(2, 3)))
    assert r["config"]["aux_prime"] == [3, 0]
    assert r["config"]["hecke"] == [[2, 0], [3, 0]]
    assert r["all_checks_pass"]


def test_run_quadratic_field_pipeline():
    r = run(RunConfig(d=5, p=11, bound=10))
    assert r["classes"]["count"] == 4
    assert r["classes"]["weights"] == [2, 3, 2, 3]
    assert r["span"]["rank"] == 3
    assert r["hilbert_checks"] is not None
    assert all(c["ok"] for c in r["hilbert_checks"])
    assert r["all_checks_pass"]


def test_run_level_one_pipeline():
    r = run(RunConfig(d=5, p=2, mode="level_one", bound=8))
    assert r["classes"]["count"] == 1
    assert r["classes"]["weights"] == [60]
    assert r["mass"] == "1/60"
    assert r["order"]["reduced_discriminant"] == [1, 0]
    assert r["all_checks_pass"]
