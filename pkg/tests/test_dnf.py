import random

from hypothesis import given, settings, strategies as st

from mpcpn.dnf import clauses, irredundant_cover, minimize, minterm_clauses, prime_implicants
from mpcpn.network import code_config, parse_bn
from mpcpn.verify import random_network


def labels(cs, names):
    return [c.label(names) for c in cs]


def test_example_clauses(example):
    up, down = clauses(example, 0)
    assert labels(up, example.names) == ["[!x2]"] and labels(down, example.names) == ["[x2]"]
    up, down = clauses(example, 2)
    assert labels(up, example.names) == ["[!x1,x2]"]
    assert sorted(labels(down, example.names)) == ["[!x2]", "[x1]"]


def test_constant_functions():
    f = parse_bn("a, 0\nb, 1")
    up, down = clauses(f, 0)
    assert up == [] and len(down) == 1 and down[0].literals == ()
    up, down = clauses(f, 1)
    assert down == [] and len(up) == 1 and up[0].literals == ()


def _check_predicate(f, i, side_fn):
    up, down = side_fn(f, i)
    for c in up + down:
        assert c.target == i and i not in {j for j, _ in c.literals}
        assert len({j for j, _ in c.literals}) == len(c.literals)
    for code in range(1 << f.n):
        y = code_config(code, f.n)
        fy = f(y)[i]
        assert any(c.satisfied_by(y) for c in up) == (y[i] == 0 and fy == 1)
        assert any(c.satisfied_by(y) for c in down) == (y[i] == 1 and fy == 0)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_clause_soundness_and_completeness(seed, n):
    f = random_network(random.Random(seed), n)
    for i in range(n):
        _check_predicate(f, i, clauses)
        _check_predicate(f, i, minterm_clauses)
        assert len(sum(clauses(f, i), [])) <= len(sum(minterm_clauses(f, i), []))


def _covers(cube, m):
    care, val = cube
    return m & care == val


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5), st.data())
def test_prime_implicants_against_brute_force(nv, data):
    minterms = data.draw(st.sets(st.integers(0, (1 << nv) - 1)))
    ms = sorted(minterms)
    primes = prime_implicants(nv, ms)
    # brute force: every cube contained in the on-set that cannot be enlarged
    implicants = []
    for care in range(1 << nv):
        for val in range(1 << nv):
            if val & ~care:
                continue
            cover = [m for m in range(1 << nv) if _covers((care, val), m)]
            if cover and set(cover) <= minterms:
                implicants.append((care, val))
    brute = [c for c in implicants if not any(d != c and (d[0] & c[0]) == d[0] and c[1] & d[0] == d[1] for d in implicants)]
    assert sorted(primes) == sorted(brute)
    cover = irredundant_cover(primes, ms)
    assert {m for m in ms if any(_covers(c, m) for c in cover)} == minterms
    for k in range(len(cover)):
        rest = cover[:k] + cover[k + 1:]
        assert not all(any(_covers(c, m) for c in rest) for m in ms)
    assert minimize(nv, ms) == cover
