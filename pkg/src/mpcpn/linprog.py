"""Exact linear programming over the rationals (two-phase tableau simplex, Bland's rule).

Variables are nonnegative. Problems here have a few dozen rows and columns
at most, so a dense tableau of :class:`~fractions.Fraction` is adequate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = ["LPResult", "solve", "feasible"]


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    row = T[r]
    piv = row[c]
    if piv != 1:
        T[r] = row = [v / piv for v in row]
    for k, other in enumerate(T):
        if k != r and other[c] != 0:
            factor = other[c]
            T[k] = [a - factor * b for a, b in zip(other, row)]
    basis[r] = c


def _simplex(T: list[list[Fraction]], basis: list[int], allowed: int) -> bool:
    """Minimise the objective held in the last row; False when unbounded.

    The last row stores reduced costs, its final entry minus the objective value.
    Only the first ``allowed`` columns may enter the basis.
    """
    m = len(T) - 1
    while True:
        obj = T[-1]
        entering = next((j for j in range(allowed) if obj[j] < 0), None)
        if entering is None:
            return True
        best = None
        for i in range(m):
            a = T[i][entering]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(T, basis, best[1], entering)


def solve(
    c: Sequence | None,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    *,
    num_vars: int | None = None,
    maximize: bool = False,
) -> LPResult:
    """Optimise ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``.

    ``c=None`` asks for feasibility only.
    """
    if num_vars is None:
        rows = list(A_ub) + list(A_eq)
        num_vars = len(c) if c is not None else (len(rows[0]) if rows else 0)
    nv = num_vars
    n_ub = len(A_ub)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for k, (a, b) in enumerate(zip(A_ub, b_ub)):
        slack = [Fraction(0)] * n_ub
        slack[k] = Fraction(1)
        rows.append([Fraction(v) for v in a] + slack)
        rhs.append(Fraction(b))
    for a, b in zip(A_eq, b_eq):
        rows.append([Fraction(v) for v in a] + [Fraction(0)] * n_ub)
        rhs.append(Fraction(b))
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise ValueError("constraint matrices and right-hand sides differ in length")
    for r in rows:
        if len(r) != nv + n_ub:
            raise ValueError("constraint rows must have one coefficient per variable")
    width = nv + n_ub
    m = len(rows)
    for k in range(m):
        if rhs[k] < 0:
            rows[k] = [-v for v in rows[k]]
            rhs[k] = -rhs[k]

    # phase 1: one artificial per row
    T = []
    for k in range(m):
        art = [Fraction(0)] * m
        art[k] = Fraction(1)
        T.append(rows[k] + art + [rhs[k]])
    obj = [Fraction(0)] * (width + m + 1)
    for k in range(m):
        for j in range(width):
            obj[j] -= T[k][j]
        obj[-1] -= T[k][-1]
    T.append(obj)
    basis = [width + k for k in range(m)]
    _simplex(T, basis, width)
    if T[-1][-1] != 0:
        return LPResult("infeasible")

    # drive artificials out of the basis; drop redundant rows
    k = 0
    while k < len(basis):
        if basis[k] >= width:
            col = next((j for j in range(width) if T[k][j] != 0), None)
            if col is None:
                del T[k]
                del basis[k]
                continue
            _pivot(T, basis, k, col)
        k += 1
    T = [row[:width] + [row[-1]] for row in T]

    if c is not None:
        cost = [Fraction(v) * (-1 if maximize else 1) for v in c] + [Fraction(0)] * n_ub
        obj = cost + [Fraction(0)]
        for k, j in enumerate(basis):
            if obj[j] != 0:
                factor = obj[j]
                obj = [a - factor * b for a, b in zip(obj, T[k])]
        T[-1] = obj
        if not _simplex(T, basis, width):
            return LPResult("unbounded")
    x = [Fraction(0)] * width
    for k, j in enumerate(basis):
        x[j] = T[k][-1]
    sol = tuple(x[:nv])
    value = None
    if c is not None:
        value = sum((Fraction(ci) * xi for ci, xi in zip(c, sol)), Fraction(0))
    return LPResult("optimal", sol, value)


def feasible(
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    *,
    num_vars: int | None = None,
) -> tuple[Fraction, ...] | None:
    """A nonnegative solution of the constraint system, or ``None``."""
    res = solve(None, A_ub, b_ub, A_eq, b_eq, num_vars=num_vars)
    return res.x if res.status == "optimal" else None
