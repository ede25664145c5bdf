"""End-to-end checks of the command-line tool: output formats and exit codes."""

import json
import os
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("VISILAT_CLI", "build/visilat")
CONFIGS = Path(os.environ.get("VISILAT_EXAMPLES", Path(__file__).resolve().parents[2] / "configs"))


def run(*args, check_code=None):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True, timeout=600)
    if check_code is not None:
        assert proc.returncode == check_code, proc.stderr
    return proc


def test_field_description():
    out = json.loads(run("field", "--field", '{"kind":"quadratic","d":-1}', check_code=0).stdout)
    assert out["discriminant"] == -4
    assert out["degree"] == 2


def test_primes_json_lines():
    lines = run("primes", "--field", '{"kind":"quadratic","d":-1}', "--max-norm", "5", check_code=0).stdout.split()
    rows = [json.loads(line) for line in lines]
    assert rows[0] == {"norm": 2, "p": 2, "f": 1, "e": 2, "g": [1, 1]}
    assert {"norm": 5, "p": 5, "f": 1, "e": 1, "g": [3, 1]} in rows
    assert len(rows) == 3


def test_predict_format():
    out = json.loads(run("predict", "--field", "Q", "--m", "2", "--X", "10000", check_code=0).stdout)
    assert set(out) == {"lo", "hi", "X", "zero"}
    assert out["zero"] is None
    assert out["X"] == 10000
    assert out["lo"].startswith("0.6078")
    assert len(out["hi"].replace("0.", "", 1)) == 30


def test_oracle_exact_rational():
    out = json.loads(run("oracle", "--field", "Q", "--m", "2", "--window", "2", check_code=0).stdout)
    assert (out["num"], out["den"]) == ("2", "3")
    assert out["agree"] is True


def test_count_report(tmp_path):
    s_file = tmp_path / "s.json"
    s_file.write_text("[[[0,0],[0,0]]]")
    report = tmp_path / "r.json"
    run("count", "--field", "-1", "--m", "2", "--s-file", str(s_file), "--region", "cube:L=10",
        "--mode", "direct", "--out", str(report), check_code=0)
    data = json.loads(report.read_text())
    assert data["total_tuples"] == 21 ** 4
    assert "wall_seconds" in data
    sieve = json.loads(run("count", "--field", "-1", "--s-file", str(s_file), "--region", "cube:L=10",
                           check_code=0).stdout)
    assert sieve["visible_count"] == data["visible_count"]


def test_count_with_transform():
    out = json.loads(run("count", "--field", "-1", "--region", "cube:L=10",
                         "--basis-transform", "[[1,1],[0,1]]", check_code=0).stdout)
    assert out["region"]["basis_transform"] == [[1, 1], [0, 1]]


def test_exit_codes(tmp_path):
    run("field", "--field", '{"kind":"quadratic","d":12}', check_code=3)
    run("predict", "--field", "Q", "--m", "1", check_code=2)
    run("count", "--region", "cube:L=-3", check_code=2)
    run("count", "--mode", "guess", check_code=2)
    cfg = json.loads((CONFIGS / "dirichlet.json").read_text())
    cfg["regions"] = []
    path = tmp_path / "empty.json"
    path.write_text(json.dumps(cfg))
    run("run", "--config", str(path), check_code=2)
    cfg = json.loads((CONFIGS / "dirichlet.json").read_text())
    cfg["field"] = {"kind": "quadratic", "d": 8}
    path.write_text(json.dumps(cfg))
    run("run", "--config", str(path), check_code=3)


def test_tolerance_failure_writes_partial_report(tmp_path):
    cfg = json.loads((CONFIGS / "dirichlet.json").read_text())
    cfg["regions"] = ["cube:L=20"]
    cfg["tolerance"] = 1e-9
    path = tmp_path / "tight.json"
    path.write_text(json.dumps(cfg))
    out = tmp_path / "report.json"
    run("run", "--config", str(path), "--out", str(out), check_code=1)
    report = json.loads(out.read_text())
    assert report["failed"] == "tolerance check failed"
    assert report["counts"][0]["passed"] is False


def test_run_pipeline_is_deterministic(tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        csv = tmp_path / f"r{k}.csv"
        run("run", "--config", str(CONFIGS / "dirichlet.json"), "--out", str(out), "--csv", str(csv),
            "--no-timing", check_code=0)
        outs.append((out.read_bytes(), csv.read_bytes()))
    assert outs[0] == outs[1]
    report = json.loads(outs[0][0])
    assert report["counts"][-1]["discrepancy"] < 0.005
    header = outs[0][1].decode().splitlines()[0]
    assert header == "region,mode,total,visible,density,lo,hi,discrepancy"


@pytest.mark.parametrize("mode", ["mc", "sieve", "direct"])
def test_thread_count_does_not_change_results(mode):
    counts = []
    for threads in ("1", "3"):
        env = dict(os.environ, VISILAT_THREADS=threads)
        proc = subprocess.run([CLI, "count", "--field", "-3", "--region", "ball:R=6", "--mode", mode,
                               "--samples", "5000", "--seed", "4"], capture_output=True, text=True, env=env)
        assert proc.returncode == 0, proc.stderr
        counts.append(json.loads(proc.stdout)["visible_count"])
    assert counts[0] == counts[1]
