"""Front-door behavior: envelopes, exit codes, determinism, verify suites."""

import json
import os
import subprocess
import sys

import pytest

import frobkern.cli as cli
from frobkern.algrep import load_module
from frobkern.sl2dist import restricted_sl2


def run_json(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_block_example(capsys):
    code, payload = run_json(capsys, ["block", "--p", "3", "--r", "2", "--lambda", "5"])
    assert code == 0
    assert payload["schema"] == 1
    assert payload["result"] == {"block": {"i": 0, "s": 1}}
    assert payload["query"]["command"] == "block"
    assert payload["verified_by_oracle"] is False


def test_period_example(capsys):
    code, payload = run_json(capsys, ["period", "--p", "3", "--r", "2", "--lambda", "0"])
    assert code == 0
    assert payload["result"] == {"period": 6}
    assert "good_prime" in payload["paper_hypotheses"]


def test_cohom_example(capsys):
    code, payload = run_json(capsys, ["cohom", "--p", "3", "--r", "2", "--n", "6"])
    assert code == 0
    assert payload["result"]["dim"] == 7


def test_cohom_all_methods_verified(capsys):
    code, payload = run_json(
        capsys, ["cohom", "--p", "3", "--r", "2", "--n", "6", "--method", "all"]
    )
    assert code == 0
    assert payload["result"]["agree"] is True
    assert payload["result"]["dims"] == {
        "closed-form": 7,
        "enumeration": 7,
        "resolution": 7,
    }
    assert payload["verified_by_oracle"] is True


def test_cohom_disagreement_exits_two(capsys, monkeypatch):
    # force the closed form wrong; the routes must disagree and exit 2
    monkeypatch.setattr(cli, "cohom_dim", lambda p, r, n: 999)
    code, payload = run_json(
        capsys, ["cohom", "--p", "3", "--r", "2", "--n", "6", "--method", "all"]
    )
    assert code == 2
    assert payload["result"]["agree"] is False


def test_more_query_commands(capsys):
    code, payload = run_json(capsys, ["depth", "--p", "3", "--lambda", "-1"])
    assert code == 0 and payload["result"] == {"depth": "infinite"}
    code, payload = run_json(capsys, ["ph", "--p", "3", "--r", "1", "--lambda", "2"])
    assert code == 0 and payload["result"] == {"ph": "projective"}
    code, payload = run_json(
        capsys, ["heller-orbit", "--p", "3", "--r", "1", "--lambda", "0", "--n", "1"]
    )
    assert code == 0 and payload["result"] == {"weight": 6}
    code, payload = run_json(
        capsys, ["block-members", "--p", "3", "--r", "2", "--lambda", "0"]
    )
    assert code == 0 and payload["result"]["members"] == [0, 1, 3, 4, 6, 7]
    code, payload = run_json(
        capsys, ["heart-weights", "--p", "3", "--r", "2", "--lambda", "6"]
    )
    assert code == 0 and payload["result"] == {"weights": [1, 4]}
    code, payload = run_json(
        capsys, ["classify-block", "--p", "3", "--r", "2", "--lambda", "2"]
    )
    assert code == 0 and payload["result"]["type"] == "tame"
    code, payload = run_json(capsys, ["complexity", "--p", "3", "--r", "2", "--lambda", "4"])
    assert code == 0 and payload["result"] == {"complexity": 3}


def test_classify_component_command(capsys):
    code, payload = run_json(
        capsys, ["classify-component", "--context", "G_rT", "--evidence", "verma"]
    )
    assert code == 0
    assert payload["result"]["components"] == ["Z[A_inf]"]
    assert "quasi-simple" in payload["result"]["note"]
    code, payload = run_json(
        capsys,
        [
            "classify-component",
            "--context",
            "G_r",
            "--evidence",
            "complexity-1",
            "--p",
            "3",
            "--s",
            "1",
        ],
    )
    assert code == 0
    assert payload["result"]["components"] == ["Z[A_inf]/tau^3"]


def test_user_errors_exit_one(capsys):
    # out-of-hypothesis query
    code = cli.main(["period", "--p", "3", "--r", "2", "--lambda", "8"])
    err = capsys.readouterr().err
    assert code == 1
    assert "depth(lambda) <= r" in err
    # out-of-range weight
    code = cli.main(["block", "--p", "3", "--r", "1", "--lambda", "7"])
    assert code == 1
    # malformed arguments (argparse) must also exit 1, not 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["block", "--p", "3", "--r", "2"])
    assert exc.value.code == 1


def test_query_determinism(capsys):
    argv = ["block", "--p", "5", "--r", "2", "--lambda", "13"]
    cli.main(argv)
    first = capsys.readouterr().out
    cli.main(argv)
    second = capsys.readouterr().out
    assert first == second


def test_verify_blocks_report(capsys):
    code, payload = run_json(capsys, ["verify", "blocks", "--p", "5"])
    assert code == 0
    report = payload["result"]
    assert report["passed"] is True
    assert all(c["status"] == "pass" for c in report["cases"])
    assert {c["input"]["r"] for c in report["cases"]} == {1, 2}
    assert "wall_ms" in report


def test_verify_determinism_modulo_wall_time(capsys):
    argv = ["verify", "verma-period", "--p", "3", "--seed", "11"]
    _, first = run_json(capsys, argv)
    _, second = run_json(capsys, argv)
    first["result"].pop("wall_ms")
    second["result"].pop("wall_ms")
    assert first == second


def test_seed_resolution(capsys, monkeypatch):
    monkeypatch.setenv("FROBKERN_SEED", "7")
    _, payload = run_json(capsys, ["verify", "blocks", "--p", "3"])
    assert payload["result"]["seed"] == 7
    _, payload = run_json(capsys, ["verify", "blocks", "--p", "3", "--seed", "9"])
    assert payload["result"]["seed"] == 9


def test_verify_budget_flag(capsys):
    code, payload = run_json(capsys, ["verify", "all", "--p", "3", "--budget-ms", "0"])
    report = payload["result"]
    assert code == 0  # inconclusive is not failure
    assert report["budget_exceeded"] is True
    assert all(c["status"] == "inconclusive" for c in report["cases"])


def test_verify_text_format(capsys):
    code = cli.main(["verify", "cohom", "--p", "3", "--format", "text"])
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS" in out


def test_verify_dump_dir(capsys, tmp_path):
    code, payload = run_json(
        capsys,
        ["verify", "meataxe-regular", "--p", "3", "--dump-dir", str(tmp_path)],
    )
    assert code == 0
    files = sorted(os.listdir(tmp_path))
    assert "regular-p3.json" in files
    reg = load_module(str(tmp_path / "regular-p3.json"), restricted_sl2(3))
    assert reg.dim == 27


def test_console_module_invocation():
    out = subprocess.run(
        [sys.executable, "-m", "frobkern.cli", "block", "--p", "3", "--r", "2", "--lambda", "5"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["result"] == {"block": {"i": 0, "s": 1}}
