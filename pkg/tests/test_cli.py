import json
import subprocess
import sys
from fractions import Fraction

import pytest

from mpcpn.cli import main
from mpcpn.encoding import encode, marking_of
from mpcpn.examples import RUNNING_EXAMPLE
from mpcpn.limits import replay_events

EXPR = RUNNING_EXAMPLE.strip().replace("\n", "\\n")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_reach_and_fixpoints(capsys):
    code, out, _ = run(capsys, "reach", "-e", EXPR, "--semantics", "mp", "--from", "000")
    assert code == 0 and out.split() == [format(c, "03b") for c in range(8)]
    code, out, _ = run(capsys, "reach", "-e", EXPR, "--semantics", "syn", "--from", "000", "--format", "json")
    assert json.loads(out)["reachable"] == ["000", "110"]
    code, out, _ = run(capsys, "fixpoints", "-e", EXPR)
    assert out.split() == ["011", "100"]


def test_input_file_and_parse(capsys, tmp_path):
    path = tmp_path / "bn.txt"
    path.write_text(RUNNING_EXAMPLE)
    code, out, _ = run(capsys, "parse", str(path), "--format", "json")
    assert code == 0 and json.loads(out)["functions"]["x3"] == "!x1 & x2"


def test_encode_formats(capsys):
    code, out, _ = run(capsys, "encode", "-e", EXPR, "--format", "json")
    doc = json.loads(out)
    assert len(doc["places"]) == 6 and len(doc["transitions"]) == 7
    code, out, _ = run(capsys, "encode", "-e", EXPR, "--format", "dot")
    assert out.startswith("digraph")


def test_verify_fa_dpn(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "fa-dpn", "-e", EXPR)
    assert code == 0 and "{000,010,011,100}" in out and "0 violations" in out


def test_verify_failure_exits_one(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "mp-cpn", "-e", "x1, x2\\nx2, !x1 | x2", "--format", "json")
    assert code == 1
    doc = json.loads(out)
    assert doc["reports"][0]["violations"] > 0
    assert doc["reports"][0]["counterexample"]["y"] == "10"


def test_limreach(capsys):
    code, out, _ = run(capsys, "limreach", "-e", EXPR, "--from", "000", "--to", "111", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["certified"] and doc["certificate"]["schedule"] == "geometric(1/2)"
    code, out, _ = run(capsys, "limreach", "-e", EXPR, "--from", "100", "--to", "000", "--format", "json")
    assert code == 0 and json.loads(out)["mp_reachable"] is False


def test_arg_and_srt(capsys):
    code, out, _ = run(capsys, "arg", "-e", EXPR, "--from", "000", "--format", "json")
    assert len(json.loads(out)["nodes"]) == 27
    code, out, _ = run(capsys, "srt", "-e", EXPR, "--from", "000", "--format", "dot")
    assert "black:invis:black" in out


def test_input_errors(capsys):
    code, out, _ = run(capsys, "parse", "-e", "x1, ((", "--error-json")
    assert code == 2 and json.loads(out)["error"] == "BNSyntaxError"
    code, _, err = run(capsys, "reach", "-e", "x1, y", "--semantics", "fa", "--from", "0")
    assert code == 2 and "undeclared" in err
    code, _, _ = run(capsys, "reach", "-e", EXPR, "--semantics", "fa", "--from", "01")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["reach", "-e", EXPR])
    assert exc.value.code == 2
    capsys.readouterr()


def test_encode_then_simulate_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "encode", "-e", EXPR, "--from", "000", "--format", "json")
    net_file = tmp_path / "net.json"
    net_file.write_text(out)
    events = [["1/4", "t_x1+:[!x2]"], ["1/2", "t_x2+:[!x1]"], ["1/3", "t_x3+:[!x1,x2]"]]
    ev_file = tmp_path / "events.json"
    ev_file.write_text(json.dumps(events))
    code, out, _ = run(capsys, "simulate", str(net_file), "--events", str(ev_file), "--format", "json")
    assert code == 0
    enc = encode(__import__("mpcpn").parse_bn(RUNNING_EXAMPLE))
    pairs = [(Fraction(a), enc.net.transitions.index(t)) for a, t in events]
    expected = replay_events(enc, marking_of((0, 0, 0)), pairs)[-1]
    final = json.loads(out)["final"]
    assert final == {enc.net.places[p]: str(v) for p, v in enumerate(expected) if v}


def test_deterministic_output():
    argv = [sys.executable, "-m", "mpcpn.cli", "verify", "--suite", "lemmas", "-e", EXPR, "--instances", "200", "--format", "json"]
    a = subprocess.run(argv, capture_output=True)
    b = subprocess.run(argv, capture_output=True)
    assert a.returncode == 0 and a.stdout == b.stdout and a.stdout


def test_help_documents_grammar():
    out = subprocess.run([sys.executable, "-m", "mpcpn.cli", "--help"], capture_output=True, text=True).stdout
    assert "decl  ::=" in out and "exit status" in out.lower() and "places" in out
