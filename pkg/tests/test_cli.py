import json
import subprocess
import sys
from pathlib import Path

import pytest

from paramqv.cli import REPORT_SCHEMA, main, parse_word, run_task, strip_timings
from paramqv.models import load_model, parse_model
from paramqv.swta import Swta
from paramqv.verify import bounded_oracle, image_chain, witness_differs
from paramqv.wtt import Wtt

import fixtures

ROOT = Path(__file__).resolve().parent.parent
BENCH = ROOT / "benchmarks"
TASKS = sorted(BENCH.glob("*/task.json"))


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def models(tmp_path):
    for name in ("A_EX", "B_EX", "A_BASES", "T_H", "MAJ"):
        suffix = ".wtt" if name in ("T_H", "MAJ") else ".swta"
        (tmp_path / (name.lower() + suffix)).write_text(getattr(fixtures, name))
    return tmp_path


# --------------------------------------------------------------- semantics


def test_eval_example(capsys, models):
    code, out, _ = run(capsys, "eval", models / "a_ex.swta", "a:1 a:2")
    assert code == 0
    assert out.strip() == "tree h=2 labels=a,a leaves=[0,0,0,1]"


def test_eval_dirac_and_undefined(capsys, models):
    code, out, _ = run(capsys, "eval", models / "a_ex.swta", "a:1,a:1", "--style", "dirac")
    assert (code, out.strip()) == (0, "4|00>")
    code, out, _ = run(capsys, "eval", models / "a_ex.swta", "a:1")
    assert (code, out.strip()) == (1, "undefined")


def test_accepts(capsys, models):
    code, out, _ = run(capsys, "accepts", models / "a_ex.swta", "tree h=2 labels=a,a leaves=[0,1,0,0]")
    assert (code, out.strip()) == (0, "accepted")
    code, out, _ = run(capsys, "accepts", models / "a_ex.swta", "tree h=2 labels=a,a leaves=[1,1,1,1]")
    assert (code, out.strip()) == (1, "rejected")


def test_empty(capsys, models, tmp_path):
    code, out, _ = run(capsys, "empty", models / "a_ex.swta")
    assert code == 1 and out.startswith("nonempty")
    dead = tmp_path / "dead.swta"
    dead.write_text("swta\nroot q\nleaves u\ncolors 1\ntrans q a 1 -> (p | p)\n")
    code, out, _ = run(capsys, "--json", "empty", dead)
    assert code == 0 and json.loads(out) == {"schema": REPORT_SCHEMA, "empty": True, "witness": None}


def test_union_image_compose_write_models(capsys, models, tmp_path):
    assert run(capsys, "union", models / "a_ex.swta", models / "b_ex.swta", "-o", tmp_path / "u.swta")[0] == 0
    assert isinstance(load_model(tmp_path / "u.swta"), Swta)
    code, out, _ = run(capsys, "image", models / "a_bases.swta", models / "t_h.wtt", models / "t_h.wtt")
    assert code == 0 and isinstance(parse_model(out), Swta)
    code, out, _ = run(capsys, "compose", models / "t_h.wtt", models / "t_h.wtt")
    assert code == 0 and isinstance(parse_model(out), Wtt)


def test_param_matches_library(capsys, models):
    code, out, _ = run(capsys, "param", models / "maj.wtt", "--offset", "2")
    assert code == 0
    T = parse_model(out)
    assert T.root == "<a>" and ("<f,a>", "x") in T.transitions


def test_gate_command(capsys):
    code, out, _ = run(capsys, "gate", "X", "--qubits", "3", "--target", "3", "--controls", "1", "2")
    assert code == 0 and isinstance(parse_model(out), Wtt)
    code, out, _ = run(capsys, "gate", "QFT", "--qubits", "4")
    assert code == 0 and parse_model(out).m == 8
    code, _, err = run(capsys, "--m", "4", "gate", "QFT", "--qubits", "4")
    assert code == 2 and "modulus" in err


def test_prime_tail_command(capsys, models):
    code, out, _ = run(capsys, "prime-tail", models / "a_bases.swta", "--levels", "1")
    assert code == 0 and "a'" in parse_model(out).alphabet


def test_verify_and_equiv_commands(capsys, models):
    b, h = models / "a_bases.swta", models / "t_h.wtt"
    code, out, _ = run(capsys, "verify", "--pre", b, "--post", b, "--circuit", h, h, "--mode", "equal")
    assert code == 0 and out.startswith("verify: holds")
    code, out, _ = run(capsys, "equiv", "--bases", b, "--left", h, h, "--right", h)
    assert code == 1 and "fails" in out


def test_oracle_command(capsys, models):
    code, out, _ = run(capsys, "--json", "oracle", models / "a_ex.swta", models / "b_ex.swta", "--depth", "2")
    rep = json.loads(out)
    assert code == 1 and rep["result"] == "fails" and len(rep["witness"]) == 2


def test_parse_word():
    assert parse_word("a:1 b:2") == (("a", "1"), ("b", "2"))
    with pytest.raises(ValueError):
        parse_word("a1")


# ------------------------------------------------------------ exit codes


def test_error_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.swta"
    bad.write_text("swta\nroot q\ntrans q a 1 -> (1*r | )\n")
    code, _, err = run(capsys, "empty", bad)
    assert code == 2 and "bad.swta:3:" in err
    code, _, err = run(capsys, "empty", tmp_path / "missing.swta")
    assert code == 2
    code, _, _ = run(capsys, "run", tmp_path / "missing.json")
    assert code == 2


def test_module_entry_point():
    p = subprocess.run(
        [sys.executable, "-m", "paramqv", "run", str(BENCH / "bv" / "task.json")],
        capture_output=True,
        text=True,
    )
    assert p.returncode == 0
    assert p.stdout.startswith("bv: holds")


# ------------------------------------------------------------ benchmarks


def test_bundled_bv_holds(capsys):
    code, out, _ = run(capsys, "run", BENCH / "bv" / "task.json")
    assert code == 0 and out.startswith("bv: holds")


def test_bundled_grover_holds():
    assert run_task(BENCH / "grover" / "task.json")["result"] == "holds"


def test_mutated_bv_fails_with_checked_witness(capsys):
    code, out, _ = run(capsys, "--json", "run", BENCH / "bv-mutated" / "task.json")
    rep = json.loads(out)
    assert code == 1 and rep["result"] == "fails"
    word = tuple(tuple(x) for x in rep["witness"])
    # re-derive both sides and check the witness directly
    base = BENCH / "bv-mutated"
    task = json.loads((base / "task.json").read_text())
    pre, post = load_model(base / task["pre"]), load_model(base / task["post"])
    res = image_chain(pre, [load_model(base / c) for c in task["circuit"]])
    assert witness_differs(res, post, word, task["mode"])
    assert not bounded_oracle(res, post, len(word), task["mode"]).holds


@pytest.mark.parametrize("task", TASKS, ids=lambda p: p.parent.name)
def test_reports_are_deterministic(task):
    a, b = run_task(task), run_task(task)
    assert json.dumps(strip_timings(a), sort_keys=True) == json.dumps(strip_timings(b), sort_keys=True)


def test_json_schema(capsys):
    code, out, _ = run(capsys, "--json", "--max-oracle-depth", "3", "run", BENCH / "bv" / "task.json")
    rep = json.loads(out)
    assert code == 0
    assert rep["schema"] == REPORT_SCHEMA
    for key in ("task", "kind", "result", "reason", "witness", "branch", "mode", "karr", "sizes", "timings"):
        assert key in rep, key
    assert set(rep["karr"]) == {"lts_states", "vectors", "max_basis", "max_bits", "dim"}
    assert rep["karr"]["max_basis"] <= rep["karr"]["dim"]
    assert rep["oracle"]["depth"] == 3 and rep["oracle"]["result"] == "holds"
    assert set(rep["timings"]) >= {"image", "check", "total", "load"}


def test_run_many_tasks(capsys):
    code, out, _ = run(capsys, "--stats", "run", *TASKS)
    lines = [ln for ln in out.splitlines() if not ln.startswith(" ")]
    assert code == 1  # the mutated task fails on purpose
    assert sorted(ln.split(":")[0] for ln in lines) == sorted(t.parent.name for t in TASKS)
    assert "karr:" in out


def test_bundle_regenerates_shipped_files(capsys, tmp_path):
    code, _, _ = run(capsys, "bundle", tmp_path)
    assert code == 0
    for task in TASKS:
        name = task.parent.name
        for f in task.parent.iterdir():
            assert (tmp_path / name / f.name).read_text() == f.read_text(), f"{name}/{f.name}"
