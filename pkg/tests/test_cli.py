from __future__ import annotations

import json
import subprocess
import sys

import pytest

from tagprelie.cli import main

T5 = "[[][[][]]]"
CHERRY = "[[][]]"


def run(capsys, *argv):
    rc = main(list(argv))
    cap = capsys.readouterr()
    return rc, cap.out, cap.err


def test_adjoin_json(capsys):
    rc, out, _ = run(capsys, "--json", "adjoin", T5, CHERRY)
    assert rc == 0
    terms = {t["tree"]: t["coeff"] for t in json.loads(out)["terms"]}
    assert terms == {"[[[][[][]]][]]": "1/1", "[[[][]][[][]]]": "2/1", "[[][[[][]][]]]": "3/1", "[[][[][[][]]]]": "4/1"}


def test_global_flags_after_subcommand(capsys):
    rc, out, _ = run(capsys, "adjoin", T5, CHERRY, "--json")
    assert rc == 0 and json.loads(out)["mode"] == "planar"


def test_single_adjunction(capsys):
    rc, out, _ = run(capsys, "adjoin", T5, CHERRY, "--at", "1", "--foot", "0")
    assert rc == 0 and "[[][[[][]][]]]" in out


def test_graft_and_bracket(capsys):
    assert run(capsys, "graft", "[a[b][c]]", "[b]")[1].count("\n") == 3
    rc, out, _ = run(capsys, "bracket", T5, "[]")
    assert rc == 0 and out.split() == ["2", T5]


def test_vinberg_witness(capsys):
    rc, out, _ = run(capsys, "associator", "--vinberg", "[]", CHERRY, "[]")
    assert rc == 0 and out.split() == ["2", CHERRY]


def test_failed_check_exits_one(capsys):
    rc, out, _ = run(capsys, "check", "vinberg", "--op", "adjoin", "--max-nodes", "4")
    assert rc == 1 and "FAIL" in out


def test_passing_check(capsys):
    rc, out, _ = run(capsys, "check", "coeffsum", "--max-nodes", "4", "--shape", "unary-binary")
    assert rc == 0 and "PASS" in out


def test_grading_check(capsys):
    rc, out, _ = run(capsys, "--json", "check", "grading", "--op", "double", "--scheme", "doubled_vertex_count", "--max-degree", "8")
    assert rc == 0 and json.loads(out)["constant_offset"] == 0


def test_enum(capsys):
    rc, out, _ = run(capsys, "--json", "enum", "--class", "Tprime", "--degrees", "0..10")
    assert rc == 0
    dims = {int(k): v for k, v in json.loads(out)["dims"].items()}
    assert [dims[d] for d in range(0, 11, 2)] == [1, 1, 2, 1, 6, 2]


def test_physics_adjoin_and_dot(capsys):
    rc, out, _ = run(capsys, "physics", "adjoin", "[[][α[][]]]", "[α[][α*]]", "--site", "1", "--foot", "1")
    assert rc == 0 and "[[][α[][α[][]]]]" in out
    rc, out, _ = run(capsys, "--dot", "physics", "encode", CHERRY)
    assert rc == 0 and out.startswith("digraph")


def test_physics_edge_insert(capsys):
    rc, out, _ = run(capsys, "physics", "edge-insert", T5, CHERRY, "--edge", "1")
    assert rc == 0 and "[[][[[][]][[][]]]]" in out and "nodes: 9" in out


def test_tag_derive(capsys):
    d = json.dumps({"base": 0, "steps": [{"op": "adjoin", "target": [1], "tree": 0}]})
    rc, out, _ = run(capsys, "tag", "derive", "watched-has", d)
    assert rc == 0 and out.strip() == "[S[NP!][VP[V[has]][VP[V[watched]][NP!]]]]"


def test_tag_derive_rejects_bad_site(capsys):
    d = json.dumps({"base": 0, "steps": [{"op": "adjoin", "target": [0], "tree": 0}]})
    rc, _, err = run(capsys, "tag", "derive", "watched-has", d)
    assert rc == 1 and err


def test_fixtures_subset(capsys):
    rc, out, _ = run(capsys, "fixtures", "--only", "ftag,parse")
    assert rc == 0 and out.count("PASS") == 2


@pytest.mark.parametrize(
    "argv, code",
    [
        (["tree", "parse", "[[]"], 1),
        (["fixtures", "--only", "nope"], 2),
        (["adjoin", T5], 2),
        (["frobnicate"], 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "tagprelie", "tree", "render", CHERRY], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.strip()
