from fractions import Fraction

from hypothesis import given, settings, strategies as st

from mpcpn.linprog import feasible, solve
from oracles import fm_feasible

F = Fraction


def test_small_optimum():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    res = solve([1, 1], [[1, 2], [3, 1]], [4, 6], maximize=True)
    assert res.status == "optimal" and res.x == (F(8, 5), F(6, 5)) and res.value == F(14, 5)


def test_infeasible_and_unbounded():
    assert solve([1], [[1]], [-1]).status == "infeasible"
    assert solve([1], A_eq=[[1]], b_eq=[2], maximize=True).value == 2
    assert solve([1, 0], [[-1, 1]], [0], maximize=True).status == "unbounded"


def test_redundant_equalities():
    x = feasible(A_eq=[[1, 1], [2, 2]], b_eq=[1, 2])
    assert x is not None and x[0] + x[1] == 1


def test_state_equation_example():
    # -v1 + v2 = -1, v1 - 2 v2 = 0
    x = feasible(A_eq=[[-1, 1], [1, -2]], b_eq=[-1, 0])
    assert x == (2, 1)


small = st.integers(-3, 3)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3), st.integers(0, 3), st.integers(0, 2), st.data())
def test_feasibility_matches_fourier_motzkin(nv, n_ub, n_eq, data):
    A_ub = [[data.draw(small) for _ in range(nv)] for _ in range(n_ub)]
    b_ub = [data.draw(small) for _ in range(n_ub)]
    A_eq = [[data.draw(small) for _ in range(nv)] for _ in range(n_eq)]
    b_eq = [data.draw(small) for _ in range(n_eq)]
    x = feasible(A_ub, b_ub, A_eq, b_eq, num_vars=nv)
    assert (x is not None) == fm_feasible(A_ub, b_ub, A_eq, b_eq, num_vars=nv)
    if x is not None:
        assert all(v >= 0 for v in x)
        assert all(sum(a * v for a, v in zip(row, x)) <= b for row, b in zip(A_ub, b_ub))
        assert all(sum(a * v for a, v in zip(row, x)) == b for row, b in zip(A_eq, b_eq))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_optimum_is_not_beaten_by_vertices(nv, m, data):
    A = [[data.draw(st.integers(0, 3)) for _ in range(nv)] for _ in range(m)]
    b = [data.draw(st.integers(0, 4)) for _ in range(m)]
    c = [data.draw(small) for _ in range(nv)]
    res = solve(c, A, b, maximize=True)
    bounded = all(any(A[k][j] > 0 for k in range(m)) for j in range(nv) if c[j] > 0)
    assert res.status == ("optimal" if bounded else "unbounded")
    if res.status == "optimal":
        # objective value v is optimal iff c x >= v + 1/1000 is infeasible
        cut = [[-cj for cj in c]]
        assert not fm_feasible(A + cut, b + [-(res.value + F(1, 1000))], num_vars=nv)
