import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mpcpn.petri import (
    INF, ExplorationCapExceeded, FiringError, Net, check_p_invariant, discrete_reach, enabling_degree,
    fire_continuous, fire_discrete, format_fraction, is_siphon, is_trap, net_from_json, net_to_dot,
    net_to_json, parse_fraction, support,
)

F = Fraction


def test_enabling_degree(halving):
    net, _ = halving
    assert enabling_degree(net, (0, 1), 1) == F(1, 2)
    assert enabling_degree(net, (1, 0), 1) == 0
    src = Net.build(["p"], [("t", {}, {"p": 1})])
    assert enabling_degree(src, (0,), 0) == INF


def test_fire_continuous(halving):
    net, m0 = halving
    assert fire_continuous(net, m0, 1, 0) == (0, 1)
    assert fire_continuous(net, m0, 0, 1) == m0
    assert fire_continuous(net, (0, 1), F(1, 2), 1) == (F(1, 2), 0)
    with pytest.raises(FiringError):
        fire_continuous(net, (0, 1), F(3, 4), 1)
    with pytest.raises(FiringError):
        fire_continuous(net, m0, -1, 0)


def test_fire_discrete(halving):
    net, _ = halving
    assert fire_discrete(net, (1, 0), 0) == (0, 1)
    with pytest.raises(FiringError):
        fire_discrete(net, (0, 1), 1)
    loop = Net.build(["p"], [("t", {"p": 1}, {"p": 1})])
    assert fire_discrete(loop, (1,), 0) == (1,)


def test_discrete_reach(halving):
    net, _ = halving
    dr = discrete_reach(net, (1, 0))
    assert set(dr.markings) == {(1, 0), (0, 1)} and dr.deadlocks == ((0, 1),) and dr.safe
    empty = Net.build(["p"], [])
    assert discrete_reach(empty, (3,)).markings == ((3,),)
    pump = Net.build(["p"], [("t", {}, {"p": 1})])
    with pytest.raises(ExplorationCapExceeded):
        discrete_reach(pump, (0,), cap=50)


def test_traps_siphons_invariants(halving):
    net, _ = halving
    assert is_trap(net, {0, 1}) and is_trap(net, set()) and is_siphon(net, set())
    assert not check_p_invariant(net, (1, 1))
    assert check_p_invariant(net, (0, 0))
    assert net.incidence[0] == (-1, 1) and net.incidence[1] == (1, -2)


def test_fractions():
    assert parse_fraction("3/6") == F(1, 2) and parse_fraction(2) == 2
    assert format_fraction(F(4, 2)) == "2" and format_fraction(F(1, 3)) == "1/3"
    with pytest.raises(ValueError):
        parse_fraction(True)


def test_json_round_trip_and_dot(halving):
    net, m0 = halving
    net2, m = net_from_json(net_to_json(net, (F(1, 3), 0)))
    assert net2 == net and m == (F(1, 3), 0)
    doc = json.loads(net_to_json(net))
    assert doc["transitions"][1] == {"name": "t2", "pre": {"p2": 2}, "post": {"p1": 1}}
    dot = net_to_dot(net, m0)
    assert 'label="2"' in dot and "shape=circle" in dot and "shape=box" in dot
    assert dot.count("label=\"1\"") == 0
    with pytest.raises(ValueError):
        net_from_json('{"places": ["a"], "transitions": [{"name": "t", "pre": {"b": 1}}]}')


def random_net(rng, P=4, T=4):
    trans = []
    for k in range(T):
        pre = {f"p{p}": rng.randint(1, 2) for p in range(P) if rng.random() < 0.4}
        post = {f"p{p}": rng.randint(1, 2) for p in range(P) if rng.random() < 0.4}
        trans.append((f"t{k}", pre, post))
    return Net.build([f"p{p}" for p in range(P)], trans)


def random_run(rng, net, m, steps):
    out = [m]
    for _ in range(steps):
        live = [t for t in range(net.num_transitions) if 0 < enabling_degree(net, m, t) < INF]
        if not live:
            break
        t = rng.choice(live)
        m = fire_continuous(net, m, enabling_degree(net, m, t) * F(rng.randint(1, 4), 4), t)
        out.append(m)
    return out


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_invariants_traps_and_support_enabledness(seed):
    rng = random.Random(seed)
    net = random_net(rng)
    m0 = tuple(F(rng.randint(0, 3), rng.randint(1, 3)) for _ in range(net.num_places))
    run = random_run(rng, net, m0, 15)
    for v in [(1, 0, 0, 0), (1, 1, 0, 0), (1, 1, 1, 1), (2, 1, 0, 1)]:
        if check_p_invariant(net, v):
            assert len({sum(a * b for a, b in zip(v, m)) for m in run}) == 1
    for mask in range(1, 16):
        S = {p for p in range(4) if mask >> p & 1}
        if is_trap(net, S) and sum(m0[p] for p in S) > 0:
            assert all(sum(m[p] for p in S) > 0 for m in run)
    for m in run:
        scaled = tuple(v * F(rng.randint(1, 5), rng.randint(1, 5)) for v in m)
        for t in range(net.num_transitions):
            assert (enabling_degree(net, m, t) > 0) == (enabling_degree(net, scaled, t) > 0) == (set(net.pre[t]) <= support(m))
            e = enabling_degree(net, m, t)
            if 0 < e < INF:
                m2 = fire_continuous(net, m, e, t)
                emptied = {p for p in net.pre[t] if m[p] / net.pre[t][p] == e and p not in net.post[t]}
                assert {p for p in net.pre[t] if m2[p] == 0} == emptied
