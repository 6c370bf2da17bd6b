"""Clause sets allowing a variable to rise or fall.

For variable ``i`` the rising clauses are an irredundant prime-implicant DNF of
``!x_i & f_i`` and the falling clauses one of ``x_i & !f_i``. The literal on
``x_i`` itself is implied by the clause direction and is not stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .boolexpr import evaluate
from .network import BooleanNetwork

__all__ = [
    "Clause",
    "prime_implicants",
    "irredundant_cover",
    "minimize",
    "clauses",
    "minterm_clauses",
]

Cube = tuple[int, int]  # (care mask, values under the mask) over local variable positions


@dataclass(frozen=True, order=True)
class Clause:
    """Conjunction of literals ``(j, positive)`` letting ``target`` move in ``direction``."""

    target: int
    direction: int  # +1 rises, -1 falls
    literals: tuple[tuple[int, bool], ...]

    def __post_init__(self):
        vars_ = [j for j, _ in self.literals]
        if len(set(vars_)) != len(vars_):
            raise ValueError("a variable may occur at most once in a clause")
        if self.target in vars_:
            raise ValueError("the target variable is implicit and cannot be a literal")
        if self.direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")

    def satisfied_by(self, y: Sequence[int]) -> bool:
        """``y |= C`` including the implicit own literal (``!x_i`` when rising, ``x_i`` when falling)."""
        own = y[self.target] == (0 if self.direction > 0 else 1)
        return own and all(bool(y[j]) == pos for j, pos in self.literals)

    def label(self, names: Sequence[str]) -> str:
        return "[" + ",".join(("" if pos else "!") + names[j] for j, pos in self.literals) + "]"


def _covers(cube: Cube, m: int) -> bool:
    care, val = cube
    return m & care == val


def prime_implicants(nvars: int, minterms: Sequence[int]) -> list[Cube]:
    full = (1 << nvars) - 1
    current = {(full, m) for m in minterms}
    primes: set[Cube] = set()
    while current:
        merged: set[Cube] = set()
        used: set[Cube] = set()
        by_care: dict[int, list[Cube]] = {}
        for c in current:
            by_care.setdefault(c[0], []).append(c)
        for care, cubes in by_care.items():
            present = {val for _, val in cubes}
            for val in present:
                for bit in range(nvars):
                    b = 1 << bit
                    if care & b and not val & b and val | b in present:
                        merged.add((care & ~b, val))
                        used.add((care, val))
                        used.add((care, val | b))
        primes |= current - used
        current = merged
    return sorted(primes, key=_cube_key)


def _cube_key(c: Cube):
    care, val = c
    return (bin(care).count("1"), care, val)


def irredundant_cover(primes: Sequence[Cube], minterms: Sequence[int]) -> list[Cube]:
    """Smallest set of primes covering every minterm (exact search; ties broken by order)."""
    minterms = sorted(set(minterms))
    if not minterms:
        return []
    essential = []
    for m in minterms:
        hits = [p for p in primes if _covers(p, m)]
        if len(hits) == 1 and hits[0] not in essential:
            essential.append(hits[0])
    left = [m for m in minterms if not any(_covers(p, m) for p in essential)]
    rest = [p for p in primes if p not in essential and any(_covers(p, m) for m in left)]
    for k in range(len(rest) + 1):
        for extra in combinations(rest, k):
            if all(any(_covers(p, m) for p in extra) for m in left):
                return sorted(essential + list(extra), key=_cube_key)
    raise AssertionError("primes do not cover the on-set")


def minimize(nvars: int, minterms: Sequence[int]) -> list[Cube]:
    return irredundant_cover(prime_implicants(nvars, minterms), minterms)


def _cofactor_minterms(f: BooleanNetwork, i: int, own: int, want: int) -> tuple[list[int], list[int]]:
    inputs = [j for j in f.inputs(i) if j != i]
    x = [0] * f.n
    x[i] = own
    on = []
    for m in range(1 << len(inputs)):
        for k, j in enumerate(inputs):
            x[j] = (m >> k) & 1
        if int(evaluate(f.functions[i], x)) == want:
            on.append(m)
    return inputs, on


def _to_clause(i: int, direction: int, inputs: list[int], cube: Cube) -> Clause:
    care, val = cube
    lits = tuple((j, bool(val >> k & 1)) for k, j in enumerate(inputs) if care >> k & 1)
    return Clause(i, direction, lits)


def _side(f: BooleanNetwork, i: int, direction: int, minterm_only: bool) -> list[Clause]:
    own, want = (0, 1) if direction > 0 else (1, 0)
    inputs, on = _cofactor_minterms(f, i, own, want)
    full = (1 << len(inputs)) - 1
    cubes = [(full, m) for m in on] if minterm_only else minimize(len(inputs), on)
    return sorted(_to_clause(i, direction, inputs, c) for c in cubes)


def clauses(f: BooleanNetwork, i: int) -> tuple[list[Clause], list[Clause]]:
    """Rising and falling clause sets of variable ``i``."""
    if not 0 <= i < f.n:
        raise IndexError(f"variable index {i} out of range for n={f.n}")
    return _side(f, i, +1, False), _side(f, i, -1, False)


def minterm_clauses(f: BooleanNetwork, i: int) -> tuple[list[Clause], list[Clause]]:
    """Full minterm DNF over the inputs of ``f_i``; same predicate, more clauses."""
    if not 0 <= i < f.n:
        raise IndexError(f"variable index {i} out of range for n={f.n}")
    return _side(f, i, +1, True), _side(f, i, -1, True)
