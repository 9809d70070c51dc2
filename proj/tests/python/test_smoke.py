"""Smoke tests for the python surface of the engine."""

import pytest

import dlchoice

SPANNING_TREE = """
.decl edge(v:symbol, u:symbol)
.input edge
.decl st(v:symbol, u:symbol) choice-domain u
.output st
st("root","L1").
st(v,u) :- st(_, v), edge(v,u).
"""

EDGES = [
    ("L1", "L2"), ("L2", "L3"), ("L3", "L4"), ("L3", "L6"),
    ("L4", "L8"), ("L6", "L8"), ("L8", "L2"), ("L2", "L10"),
]


def test_spanning_tree_run():
    out = dlchoice.run_program(SPANNING_TREE, {"edge": EDGES})
    st = set(out["st"])
    assert len(st) == 7
    assert ("root", "L1") in st
    assert ("L8", "L2") not in st
    # Exactly one incoming edge per node.
    targets = [u for (_, u) in st]
    assert len(targets) == len(set(targets))


def test_number_typing_round_trip():
    out = dlchoice.run_program(
        ".decl item(x:number)\n.input item\n"
        ".decl double(x:number, y:number)\n.output double\n"
        "double(x, x + x) :- item(x).\n",
        {"item": [(3,), (5,)]},
    )
    assert set(out["double"]) == {(3, 6), (5, 10)}


def test_emit_ram_mentions_the_guarded_insert():
    ram = dlchoice.emit_ram(SPANNING_TREE)
    assert "GUARDED INSERT" in ram
    assert "new_st" in ram
    assert dlchoice.emit_ram(SPANNING_TREE) == ram


def test_emit_desugared_lowers_choice_goals():
    source = (
        ".decl edge(v:symbol, u:symbol)\n.input edge\n"
        ".decl st(v:symbol, u:symbol)\n.output st\n"
        'st("root","L1").\n'
        'st(v, u) :- st(_, v), edge(v,u), choice((u), (v)), u != "L1".\n'
    )
    desugared = dlchoice.emit_desugared(source)
    assert "st__choice_r1" in desugared
    assert "choice-domain u" in desugared


def test_shuffled_policy_is_seed_deterministic():
    a = dlchoice.run_program(SPANNING_TREE, {"edge": EDGES}, policy="shuffled", seed=9)
    b = dlchoice.run_program(SPANNING_TREE, {"edge": EDGES}, policy="shuffled", seed=9)
    assert a == b


def test_compile_errors_raise():
    with pytest.raises(ValueError, match="CycleError"):
        dlchoice.run_program(
            ".decl edge(v:symbol, u:symbol)\n.input edge\n"
            ".decl st(v:symbol, u:symbol)\n.output st\n"
            "st(v,u) :- st(_,v), edge(v,u), !st(_,u).\n",
            {"edge": []},
        )
    with pytest.raises(ValueError, match="SyntaxError"):
        dlchoice.rule_count("a(x :- b.")


def test_rule_count():
    assert dlchoice.rule_count(SPANNING_TREE) == 1
