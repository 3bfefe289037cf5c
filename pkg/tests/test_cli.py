import json
import subprocess
import sys

import pytest

from twistlab.cli import main


def run(*args):
    return subprocess.run([sys.executable, "-m", "twistlab", *args], capture_output=True,
                          text=True, timeout=600)


def test_verify_base_exit_code_and_records(tmp_path):
    r = run("--report-path", str(tmp_path), "verify", "base")
    assert r.returncode == 0, r.stderr
    recs = [json.loads(line) for line in r.stdout.splitlines()]
    assert recs and all(rec["pass"] for rec in recs)
    for rec in recs:
        assert {"family", "label", "claim", "measured", "expected", "tol", "pass"} <= set(rec)
    assert (tmp_path / "verify_base.jsonl").exists()
    assert (tmp_path / "pass_fail.png").stat().st_size > 0


def test_report_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run("--bound", "300", "--report-path", str(d), "verify", "ii").returncode == 0
    assert (a / "verify_ii.jsonl").read_bytes() == (b / "verify_ii.jsonl").read_bytes()
    assert (a / "ord2_ii.png").exists()


def test_jobs_do_not_change_the_report(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run("--bound", "120", "--jobs", "1", "--report-path", str(a), "verify", "waldspurger")
    run("--bound", "120", "--jobs", "3", "--report-path", str(b), "verify", "waldspurger")
    assert (a / "verify_waldspurger.jsonl").read_bytes() == \
        (b / "verify_waldspurger.jsonl").read_bytes()
    assert (a / "waldspurger_identity.png").exists()


def test_failing_check_gives_nonzero_exit():
    # the M = 53 clause of the bsd tag fails: the central value vanishes
    r = run("--bound", "100", "verify", "bsd")
    assert r.returncode == 1
    recs = [json.loads(line) for line in r.stdout.splitlines()]
    bad = [rec for rec in recs if not rec["pass"]]
    assert [rec["label"] for rec in bad] == ["M=53"]


def test_cache_commands(tmp_path, capsys):
    path = tmp_path / "ap.tsv"
    assert main(["--cache-path", str(path), "--bound", "500", "cache", "save"]) == 0
    assert main(["--cache-path", str(path), "cache", "check"]) == 0
    with open(path, "a") as fh:
        fh.write("601\tnot-a-number\n")
    assert main(["--cache-path", str(path), "cache", "load"]) == 1
    out = capsys.readouterr().out.strip().splitlines()[-1]
    n = sum(1 for _ in open(path))
    assert f":{n}:" in json.loads(out)["error"]


@pytest.mark.parametrize("args", [["classgroup", "--", "-455"], ["selmer", "5", "--", "-19"],
                                  ["tamagawa", "65"], ["lvalue", "5", "--", "-19"],
                                  ["waldspurger", "13"], ["heegner", "19"],
                                  ["--bound", "100", "scan", "main3"]])
def test_subcommands(args, capsys):
    assert main(args) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines and all(json.loads(line)["pass"] for line in lines)


def test_bad_input_is_reported(capsys):
    assert main(["lvalue", "18"]) == 2
    assert "error" in json.loads(capsys.readouterr().out)
