import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mpcpn.encoding import encode, marking_of
from mpcpn.petri import Net, support
from mpcpn.symbolic import NodeCapExceeded, build_arg, build_srt, drainable, max_firing_set, state_equation_feasible
from mpcpn.verify import random_network

F = Fraction


def supports(arg, names):
    return {frozenset(arg.names(S)) for S in arg.nodes} == {frozenset(s) for s in names}


def test_halving_arg_and_srt(halving):
    net, m0 = halving
    arg = build_arg(net, m0)
    assert supports(arg, [["p1"], ["p2"], ["p1", "p2"], []])
    border = arg.border_edges()
    assert len(border) == 1
    e = border[0]
    assert arg.names(arg.nodes[e.source]) == ["p1", "p2"] and arg.nodes[e.target] == frozenset()
    assert sorted(e.limit) == [0, 1]
    tree = build_srt(net, m0, arg)
    assert tree.size() == 2 and tree.depth() == 1
    assert len(tree.root.members) == 3 and tree.leaves()[0].mode == frozenset()
    assert '"black:invis:black"' in arg.to_dot() and "digraph srt" in tree.to_dot()


def test_max_firing_set(halving):
    net, _ = halving
    assert max_firing_set(net, {0}).transitions == frozenset({0, 1})
    assert max_firing_set(net, set()).transitions == frozenset()


def test_state_equation(halving):
    net, m0 = halving
    assert state_equation_feasible(net, m0, (0, 0), [0, 1])
    assert not state_equation_feasible(net, m0, (0, 0), [0])
    assert state_equation_feasible(net, m0, m0, [])
    assert drainable(net, frozenset({0, 1}), [0, 1]) is not None
    assert drainable(net, frozenset({0}), [0]) is None


def test_running_example_structure(example):
    enc = encode(example)
    m0 = marking_of((0, 0, 0))
    arg = build_arg(enc.net, m0)
    assert len(arg.nodes) == 27 and len(arg.edges) == 142 and len(arg.border_edges()) == 44
    tree = build_srt(enc.net, m0, arg)
    root = {frozenset(arg.nodes[k]) for k in tree.root.members}
    assert len(root) == 21
    for x in [(0, 0, 0), (0, 0, 1), (1, 1, 0), (1, 1, 1)]:
        assert support(marking_of(x)) in root
    leaf_supports = {arg.nodes[leaf.entry] for leaf in tree.leaves()}
    assert leaf_supports == {support(marking_of((0, 1, 1))), support(marking_of((1, 0, 0)))}
    assert all(leaf.mode == frozenset() for leaf in tree.leaves())
    assert tree.size() == 79 and tree.depth() == 2


def test_caps():
    pump = Net.build(["a", "b", "c", "d"], [("t", {"a": 1}, {"b": 1}), ("u", {"b": 1}, {"c": 1}), ("v", {"c": 1}, {"d": 1})])
    with pytest.raises(NodeCapExceeded):
        build_arg(pump, (1, 0, 0, 0), cap=2)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_modes_shrink_and_tree_bounded(seed, n):
    rng = random.Random(seed)
    enc = encode(random_network(rng, n))
    x = tuple(rng.randrange(2) for _ in range(n))
    arg = build_arg(enc.net, marking_of(x))
    for e in arg.edges:
        assert arg.modes[e.target] <= arg.modes[e.source]
        assert (e.kind == "border") == (arg.modes[e.target] < arg.modes[e.source])
    tree = build_srt(enc.net, marking_of(x), arg)
    tree.check()
    assert tree.depth() <= enc.net.num_transitions
    for node in tree.walk():
        assert all(arg.modes[k] == node.mode for k in node.members)
