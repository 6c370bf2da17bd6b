import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mpcpn.encoding import HALF, encode, marking_of
from mpcpn.limits import (
    CertificateError, FiringEvent, LimSequence, abstract_sequence, abstract_to_support, certify,
    construct_lim_sequence, mp_limreach,
)
from mpcpn.mp import DOWN, UP, ThreePhaseWitness, mp_reach_boolean, replay, three_phase_witness
from mpcpn.network import code_config, parse_bn
from mpcpn.verify import random_network, random_prefix
from oracles import lim_reachable

F = Fraction
SELF_LOOP = parse_bn("x1, x2\nx2, !x1 | x2")


def tid(enc, name):
    return enc.net.transitions.index(name)


def test_construct_full_example(example):
    enc = encode(example)
    w = three_phase_witness(example, (0, 0, 0), (1, 1, 1))
    seq = construct_lim_sequence(enc, w)
    assert len(seq.prefix) == 3 and all(e.alpha == HALF for e in seq.prefix)
    assert seq.after_prefix() == (HALF,) * 6
    assert {enc.net.transitions[t] for t in seq.kernel} == {"t_x1+:[!x2]", "t_x2+:[!x1]", "t_x3+:[!x1,x2]"}
    assert seq.limit() == seq.target == marking_of((1, 1, 1))
    seq.validate(20)
    assert seq.partial(3) == (F(1, 16),) * 3 + (F(15, 16),) * 3
    doc = json.loads(seq.to_json())
    assert doc["schedule"] == "geometric(1/2)" and doc["prefix"][0][0] == "1/2"


def test_empty_witness(example):
    w = three_phase_witness(example, (0, 1, 0), (0, 1, 0))
    seq = construct_lim_sequence(example, w)
    assert seq.prefix == () and seq.kernel == ()
    seq.validate()


def test_kernel_half_enabled_at_peak(example):
    enc = encode(example)
    for y in mp_reach_boolean(example, (0, 0, 0)):
        w = three_phase_witness(example, (0, 0, 0), y, self_pinned=True)
        seq = construct_lim_sequence(enc, w)
        seq.validate()
        if seq.kernel:
            peak = seq.after_prefix()
            from mpcpn.petri import enabling_degree

            assert all(enabling_degree(enc.net, peak, t) >= HALF for t in seq.kernel)


def test_invalid_witness_rejected(example):
    bad = ThreePhaseWitness((0, 0, 0), (0, 0, 1), ((2, UP),), (), ((2, 1),))
    with pytest.raises(ValueError):
        construct_lim_sequence(example, bad)


def test_tampered_certificate_fails(example):
    enc = encode(example)
    seq = certify(example, (0, 0, 0), (1, 1, 1))
    wrong = LimSequence(enc, seq.start, seq.prefix, seq.kernel, marking_of((1, 1, 0)))
    with pytest.raises(CertificateError):
        wrong.validate()
    short = LimSequence(enc, seq.start, seq.prefix[:1], seq.kernel, seq.target)
    with pytest.raises(CertificateError):
        short.validate()


def test_abstract_examples(example):
    enc = encode(example)
    t1, t2, t3 = (tid(enc, n) for n in ("t_x1+:[!x2]", "t_x2+:[!x1]", "t_x3+:[!x1,x2]"))
    assert abstract_sequence(enc, (0, 0, 0), [(F(1, 4), t1)]) == [(0, UP)]
    assert abstract_sequence(enc, (0, 0, 0), []) == []
    path = abstract_sequence(enc, (0, 0, 0), [FiringEvent(F(1, 4), t) for t in (t1, t2, t3)])
    assert path == [(0, UP), (1, UP), (2, UP)]
    replay(example, (0, 0, 0), path)
    full = abstract_to_support(enc, (0, 0, 0), [(1, t1)])
    assert replay(example, (0, 0, 0), full)[-1] == (1, 0, 0)


def test_abstract_rejects_invalid_prefix(example):
    enc = encode(example)
    with pytest.raises(ValueError):
        abstract_sequence(enc, (0, 0, 0), [(F(1, 4), tid(enc, "t_x3+:[!x1,x2]"))])
    with pytest.raises(ValueError):
        abstract_sequence(enc, (0, 0, 0), [(0, tid(enc, "t_x1+:[!x2]"))])


def test_mp_limreach_verdicts(example):
    v = mp_limreach(example, (0, 0, 0), (1, 1, 1))
    assert v and v.certified
    v = mp_limreach(example, (1, 0, 0), (0, 0, 0))
    assert not v and v.certificate is None and v.reason == "not MP-reachable"


def test_self_loop_counterexample():
    # x2 = !x1 | x2 has no falling transition once encoded, yet MP lets a transient x2 read its own 0.
    enc = encode(SELF_LOOP)
    assert enc.falling[1] == ()
    assert (1, 0) in mp_reach_boolean(SELF_LOOP, (0, 0))
    assert not lim_reachable(enc.net, marking_of((0, 0)), marking_of((1, 0)))
    v = mp_limreach(SELF_LOOP, (0, 0), (1, 0))
    assert v.reachable and not v.certified and "own opposite value" in v.reason
    assert three_phase_witness(SELF_LOOP, (0, 0), (1, 0), self_pinned=True) is None


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_certificates_agree_with_the_characterisation(seed, n):
    rng = random.Random(seed)
    f = random_network(rng, n)
    enc = encode(f)
    x = code_config(rng.randrange(1 << n), n)
    for c in range(1 << n):
        y = code_config(c, n)
        seq = certify(f, x, y)
        assert (seq is not None) == lim_reachable(enc.net, marking_of(x), marking_of(y))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_abstraction_of_random_prefixes(seed, n):
    rng = random.Random(seed)
    f = random_network(rng, n)
    enc = encode(f)
    x = code_config(rng.randrange(1 << n), n)
    prefix = random_prefix(rng, enc, marking_of(x), 12)
    path = abstract_sequence(enc, x, prefix)
    end = replay(f, x, path)[-1]
    touched = {enc.variable(e.transition) for e in prefix}
    assert {i for i, v in enumerate(end) if v >= 2} == touched
    full = abstract_to_support(enc, x, prefix)
    replay(f, x, full)
