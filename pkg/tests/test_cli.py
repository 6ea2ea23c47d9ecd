"""Command-line surface: flags, exit codes, JSON/CSV output, determinism."""

import io
import json
from contextlib import redirect_stderr, redirect_stdout

import pytest

from fatpoints.cli import run


def invoke(argv, env_seed=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if env_seed is not None:
        monkeypatch.setenv("FATPOINT_SEED", str(env_seed))
    with redirect_stdout(out), redirect_stderr(err):
        code = run(argv)
    return code, out.getvalue(), err.getvalue()


def invoke_stdin(argv, text):
    import sys

    out, err = io.StringIO(), io.StringIO()
    old = sys.stdin
    sys.stdin = io.StringIO(text)
    try:
        with redirect_stdout(out), redirect_stderr(err):
            code = run(argv)
    finally:
        sys.stdin = old
    return code, out.getvalue(), err.getvalue()


def test_prove_empty_and_verify_round_trip(tmp_path):
    code, out, _ = invoke(["prove-empty", "--n", "4", "--degree", "8,-1", "--mults", "5,0:8"])
    assert code == 0
    cert = json.loads(out)
    assert cert["claim"] == {"N": 4, "degree": [8, -1], "mults": [[5, 0, 8]]}
    assert len(cert["steps"]) == 4

    path = tmp_path / "cert.json"
    path.write_text(out)
    code, vout, _ = invoke(["verify", "--cert", str(path)])
    assert code == 0
    assert json.loads(vout)["ok"] is True

    code, vout, _ = invoke_stdin(["verify", "--cert", "-"], out)
    assert code == 0


def test_verify_rejects_tampered_file(tmp_path):
    _, out, _ = invoke(["prove-empty", "--n", "4", "--degree", "8,-1", "--mults", "5,0:8"])
    doc = json.loads(out)
    doc["steps"][1]["k"] = [-2, -5]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, vout, _ = invoke(["verify", "--cert", str(path)])
    assert code == 1
    assert json.loads(vout)["failed_step"] == 1


def test_prove_empty_failure_exit_code():
    code, out, err = invoke(["prove-empty", "--n", "2", "--degree", "100", "--mults", "1:5"])
    assert code == 2
    assert out == ""
    assert "failure" in err


def test_prove_empty_with_script(tmp_path):
    script = {
        "how": "merge",
        "part": {
            "system": {"N": 2, "degree": [2, -1], "mults": [[1, 0, 4]]},
            "prove": {"how": "evain", "scale": 2},
        },
        "rest": {
            "system": {"N": 2, "degree": [2, -1], "mults": [[2, 0, 2]]},
            "prove": {"how": "greedy"},
        },
    }
    path = tmp_path / "script.json"
    path.write_text(json.dumps(script))
    code, out, _ = invoke(
        ["prove-empty", "--n", "2", "--degree", "2,-1", "--mults", "2,0:1;1,0:4",
         "--script", str(path)]
    )
    assert code == 0
    assert json.loads(out)["claim"]["mults"] == [[2, 0, 1], [1, 0, 4]]


def test_bound_and_checks():
    code, out, _ = invoke(["bound", "--n", "4", "--points", "128"])
    assert code == 0
    assert json.loads(out)["bound"] == {"num": 16, "den": 5}

    code, out, _ = invoke(["hh-check", "--n", "4", "--points", "71"])
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] is True and data["bound"] == {"num": 23, "den": 10}

    code, out, _ = invoke(["chudnovsky", "--n", "2", "--points", "10"])
    assert code == 0

    code, out, _ = invoke(["threshold", "--n", "4", "--points", "71"])
    assert code == 0
    assert json.loads(out)["r_threshold"] == 46


def test_failed_verdict_exit_code():
    # one point: bound 1 equals rhs (reg = 1), strict check fails
    code, out, _ = invoke(["hh-check", "--n", "4", "--points", "1"])
    assert code == 1
    assert json.loads(out)["verdict"] is False


def test_threshold_undefined_is_internal_error():
    code, out, err = invoke(["threshold", "--n", "4", "--points", "1"])
    assert code == 70
    assert out == ""
    assert "threshold" in json.loads(err)["error"]


def test_oracle_dim_and_alpha(monkeypatch):
    code, out, _ = invoke(["oracle-dim", "--n", "2", "--degree", "4", "--mults", "2:5"])
    assert code == 0
    assert json.loads(out)["dimension"] == 1

    code, out, _ = invoke(["alpha", "--n", "2", "--points", "5", "--power", "2"])
    assert code == 0
    assert json.loads(out)["alpha"] == 4

    code, out, _ = invoke(
        ["oracle-dim", "--n", "2", "--degree", "4", "--mults", "2:5"],
        env_seed=99,
        monkeypatch=monkeypatch,
    )
    assert json.loads(out)["seed"] == 99

    # parametric multiplicities are not oracle material
    code, _, err = invoke(["oracle-dim", "--n", "2", "--degree", "4", "--mults", "2,1:5"])
    assert code == 70


def test_sweep_csv():
    code, out, _ = invoke(["sweep", "--n", "4", "--from", "8", "--to", "12", "--check", "hh"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "N,s,bound,rhs,verdict"
    assert lines[1] == "4,8,8/5,3/2,true"
    assert len(lines) == 6
    assert all(line.endswith("true") for line in lines[1:])

    code, out, _ = invoke(["sweep", "--n", "4", "--from", "1", "--to", "8", "--check", "hh"])
    assert code == 1  # tiny counts fail the strict check


def test_usage_errors_exit_64():
    for argv in (
        ["prove-empty", "--n", "4", "--degree", "8,-1"],  # missing --mults
        ["prove-empty", "--n", "4", "--degree", "8,-1,-2", "--mults", "5,0:8"],
        ["prove-empty", "--n", "4", "--degree", "8,-1", "--mults", "5,0"],
        ["sweep", "--n", "4", "--from", "1", "--to", "5", "--check", "nope"],
        ["no-such-command"],
    ):
        code, _, _ = invoke(argv)
        assert code == 64, argv


def test_byte_identical_reruns():
    for argv in (
        ["prove-empty", "--n", "4", "--degree", "23,-1", "--mults", "20,0:4;10,0:7"],
        ["oracle-dim", "--n", "2", "--degree", "2", "--mults", "1:5", "--seed", "3"],
        ["bound", "--n", "5", "--points", "127"],
        ["sweep", "--n", "5", "--from", "9", "--to", "40", "--check", "chudnovsky"],
    ):
        first = invoke(list(argv))
        second = invoke(list(argv))
        assert first == second
