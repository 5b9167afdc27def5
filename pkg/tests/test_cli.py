import json

import pytest

from dkh.cli import run

from conftest import DATA

EX3, EX4, EX5 = (str(DATA / n) for n in ("ex3.json", "ex4.json", "ex5.json"))


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_single_state(capsys):
    assert call(capsys, "check", "-m", EX5, "-f", "Kh{0,1}(~p & ~q)", "-s", "s_pq")[:2] == (0, "true\n")
    assert call(capsys, "check", "-m", EX5, "-f", "Kh{0}~p", "-s", "s_pq")[:2] == (1, "false\n")


def test_check_all_states(capsys):
    code, out, _ = call(capsys, "check", "-m", EX3, "-f", "top")
    assert code == 0 and out.count("true") == 4
    code, out, _ = call(capsys, "check", "-m", EX3, "-f", "p")
    assert code == 1 and "s_pq: true" in out and "np_q: false" in out


def test_closure(capsys):
    code, out, _ = call(capsys, "closure", "-m", EX4, "-g", "0,1")
    assert code == 0
    assert set(out.split()) == {"{d}", "{a}", "{b}", "{c}", "{a,c}", "{b,c}"}
    code, out, _ = call(capsys, "closure", "-m", EX4, "-g", "0,1", "--nested")
    assert set(out.split()) == {"d", "a", "b", "c", "<a,c>", "<b,c>"}
    code, out, _ = call(capsys, "closure", "-m", EX4, "-g", "")
    assert code == 0 and out == ""


def test_synth_then_verify(capsys, tmp_path):
    path = tmp_path / "s.json"
    code, out, _ = call(capsys, "synth", "-m", EX5, "-s", "s_pq", "-g", "0,1", "-f", "~p & ~q", "-o", str(path))
    assert code == 0
    assert json.loads(path.read_text()) == {
        "group": [0, 1],
        "map": [{"class_rep": "s_pq", "action": ["a", "b"]}],
    }
    code, out, _ = call(capsys, "verify", "-m", EX5, "-g", "0,1", "--strategy", str(path), "-s", "s_pq", "-f", "~p & ~q")
    assert code == 0
    assert "terminating: true" in out and "leaves: [{t3_np_nq}]" in out and "success: true" in out


def test_synth_none(capsys):
    code, out, _ = call(capsys, "synth", "-m", EX5, "-s", "s_pq", "-g", "0", "-f", "~p")
    assert code == 1 and out.strip() == "no strategy"


def test_verify_failure_and_bad_strategy(capsys, tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"group": [0, 1], "map": []}))
    code, out, _ = call(capsys, "verify", "-m", EX5, "-g", "0,1", "--strategy", str(path), "-s", "s_pq", "-f", "~p")
    assert code == 1 and "bad_leaf: {s_pq}" in out
    path.write_text(json.dumps({"group": [0, 1], "map": [{"class_rep": "s_pq", "action": ["c"]}]}))
    code, _, err = call(capsys, "verify", "-m", EX5, "-g", "0,1", "--strategy", str(path), "-s", "s_pq", "-f", "~p")
    assert code == 2 and "not executable" in err


def test_prove(capsys, tmp_path):
    code, out, _ = call(capsys, "prove", str(DATA / "monokh.prf"))
    assert code == 0 and out.count("OK") == 6
    bad = tmp_path / "bad.prf"
    bad.write_text("1: p -> q ; TAUT\n")
    code, out, _ = call(capsys, "prove", str(bad))
    assert code == 1 and "1: FAIL" in out


def test_fuzz(capsys):
    code, out, _ = call(capsys, "fuzz", "--seed", "2", "--models", "5")
    doc = json.loads(out)
    assert code == 0 and doc["models_tested"] == 5 and doc["violations"] == []


def test_counter(capsys):
    code, out, _ = call(capsys, "counter", "--schema", "coop", "--seed", "0", "--budget", "10000")
    assert code == 0 and json.loads(out)["formula"]
    code, out, _ = call(capsys, "counter", "--schema", "AxKhbot", "--seed", "0", "--budget", "50")
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "-m", "/nonexistent.json", "-f", "p"],
        ["check", "-m", EX5, "-f", "p &"],
        ["check", "-m", EX5, "-f", "p", "-s", "nowhere"],
        ["check", "-m", EX5, "-f", "K{7}p"],
        ["closure", "-m", EX4, "-g", "0,x"],
        ["fuzz", "--models", "0"],
        ["bogus"],
        [],
    ],
)
def test_errors_exit_2(capsys, argv):
    assert call(capsys, *argv)[0] == 2


def test_invalid_model_file(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"agents": 1, "states": ["a"], "actions": [{"name": "x", "owner": [], "moves": []}]}))
    code, _, err = call(capsys, "check", "-m", str(path), "-f", "top")
    assert code == 2 and "empty owner" in err
