import io
import json
import os
import subprocess
import sys

import pytest

from charp_nbg.cli import SUMMARY_COLUMNS, main
from charp_nbg.config import shipped_path


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines() if line.startswith("{")]


def summary(text):
    lines = [line for line in text.splitlines() if not line.startswith("{")]
    return [line.split("\t") for line in lines]


def test_verify_theorem_q4():
    code, text = run("verify-theorem", "--tower", "q4b1", "--samples", "100", "--seed", "7")
    assert code == 0
    table = summary(text)
    assert tuple(table[0]) == SUMMARY_COLUMNS
    rows = {r[0]: r for r in table[1:]}
    assert rows["1 mod 4"][1:] == ["certificate", "100", "0", "100/100 generators"]
    for res in ("0 mod 4", "2 mod 4", "3 mod 4"):
        assert rows[res][1] == "counterexample(wrong-residue)" and rows[res][3] == "0"


def test_different_reports_w():
    code, text = run("different", "--tower", str(shipped_path("q4b1")))
    assert code == 0
    rec = next(r for r in records(text) if r["kind"] == "different")
    assert rec["w"] == rec["w_hilbert"] == 6


@pytest.mark.parametrize("rho,generator", [("theta", False), ("theta^3", True), ("theta^3*T + theta", True)])
def test_nbg_test_methods_agree(rho, generator):
    code, text = run("nbg-test", "--tower", "q4b1", "--rho", rho)
    assert code == 0
    verdicts = [r for r in records(text) if r["kind"] == "verdict"]
    assert {v["method"] for v in verdicts} == {"trace", "hopf-rank"}
    assert {v["is_generator"] for v in verdicts} == {generator}


@pytest.mark.parametrize("argv", [
    ["build", "--tower", "mixed"],
    ["hopf-basis", "--tower", "q4b1"],
    ["counterexample", "--tower", "mixed", "--b", "3"],
    ["counterexample", "--tower", "tame2", "--b", "0"],
    ["different", "--tower", "tame-nonp"],
])
def test_subcommands_pass(argv):
    code, text = run(*argv)
    assert code == 0
    assert all(r["passed"] for r in records(text) if r["kind"] == "check")


def test_header_records_config():
    _, text = run("build", "--tower", "q2b1", "--seed", "11", "--prec", "80")
    head = records(text)[0]
    assert head["kind"] == "config"
    assert head["seed"] == 11 and head["precision"] == 80 and head["tower"]["p"] == 2


def test_precision_sources(monkeypatch):
    monkeypatch.setenv("CHARP_NBG_PREC", "96")
    assert records(run("build", "--tower", "q2b1")[1])[0]["precision"] == 96
    assert records(run("build", "--tower", "q2b1", "--prec", "70")[1])[0]["precision"] == 70
    monkeypatch.delenv("CHARP_NBG_PREC")
    assert records(run("build", "--tower", "q2b1")[1])[0]["precision"] == 64


def test_tsv_format_has_only_the_table():
    code, text = run("different", "--tower", "q2b1", "--format", "tsv")
    assert code == 0
    lines = text.splitlines()
    assert lines[0].split("\t") == list(SUMMARY_COLUMNS)
    assert len(lines) == 2 and "w=2" in lines[1]


def test_exit_codes(tmp_path, capsys):
    assert run("frobnicate")[0] == 64
    assert run("build")[0] == 64
    assert "usage" in capsys.readouterr().err
    assert run("build", "--tower", "nosuch")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"p": 2, "steps": [{"kind": "artin-schreier", "params": {"q": 2, "alpha": "T^-2"}}]}')
    assert run("build", "--tower", str(bad))[0] == 2
    bad.write_text("{not json")
    assert run("build", "--tower", str(bad))[0] == 2
    assert run("nbg-test", "--tower", "q2b1", "--rho", "theta +")[0] == 2
    assert run("counterexample", "--tower", "q4b1", "--b", "1")[0] == 2


def test_failed_check_exits_one(monkeypatch):
    import charp_nbg.cli as cli
    monkeypatch.setattr(cli, "trace_dual_check", lambda *a, **k: {"contained": False, "witness": None})
    assert run("different", "--tower", "q2b1")[0] == 1


def test_custom_tower_file(tmp_path):
    desc = {"p": 3, "f0": 1, "steps": [{"kind": "artin-schreier", "params": {"q": 3, "alpha": "T^-4 + T^-1"}}]}
    path = tmp_path / "q3b4.json"
    path.write_text(json.dumps(desc))
    code, text = run("different", "--tower", str(path))
    assert code == 0
    rec = next(r for r in records(text) if r["kind"] == "different")
    assert rec["w"] == (4 + 1) * (3 - 1)


def test_output_is_deterministic():
    argv = ["verify-theorem", "--tower", "tame2", "--samples", "10"]
    assert run(*argv)[1] == run(*argv)[1]


def test_module_entry_point():
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "charp_nbg", "build", "--tower", "q2b1", "--format", "tsv"],
                          capture_output=True, text=True, env=env, timeout=60)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0].split("\t") == list(SUMMARY_COLUMNS)
