"""Compilation of a Boolean network into its safe Petri net, and the marking maps.

Place ``i`` holds variable ``i`` at value 0 and place ``i + n`` at value 1.
Every clause of the rising/falling DNF of variable ``i`` becomes one
transition moving the token of ``i`` and looping on the places its
literals read.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from .dnf import Clause, clauses, minterm_clauses
from .mp import DOWN, UP
from .network import BooleanNetwork
from .petri import Net, check_p_invariant, format_fraction, net_to_dict

__all__ = [
    "EncodedNet",
    "InvariantViolation",
    "HALF",
    "encode",
    "marking_of",
    "discrete_marking_of",
    "mu_contains",
    "decode_support",
    "size_estimate",
    "encoded_to_json",
]

HALF = Fraction(1, 2)


class InvariantViolation(ValueError):
    """A marking breaks a ``m_i + m_{i+n} = 1`` place invariant."""


@dataclass(frozen=True)
class EncodedNet:
    bn: BooleanNetwork
    net: Net
    clauses: tuple[Clause, ...]  # clause of each transition, in transition order

    @property
    def n(self) -> int:
        return self.bn.n

    def place_of(self, i: int, value: int) -> int:
        return i + self.n * value

    def variable_of_place(self, p: int) -> int:
        return p % self.n

    def variable(self, t: int) -> int:
        return self.clauses[t].target

    def direction(self, t: int) -> int:
        return self.clauses[t].direction

    @cached_property
    def rising(self) -> tuple[tuple[int, ...], ...]:
        """Transitions raising each variable (``T_i^+``)."""
        return tuple(
            tuple(t for t, c in enumerate(self.clauses) if c.target == i and c.direction > 0) for i in range(self.n)
        )

    @cached_property
    def falling(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(t for t, c in enumerate(self.clauses) if c.target == i and c.direction < 0) for i in range(self.n)
        )

    def acting_on(self, i: int) -> tuple[int, ...]:
        return self.rising[i] + self.falling[i]

    def invariant(self, i: int) -> tuple[int, ...]:
        """Indicator vector of ``{i, i+n}``."""
        v = [0] * (2 * self.n)
        v[i] = v[i + self.n] = 1
        return tuple(v)

    def check_structure(self) -> None:
        """Assert the structural invariants of the encoding."""
        n = self.n
        if self.net.num_places != 2 * n:
            raise AssertionError("encoding must have exactly 2n places")
        for i in range(n):
            if not check_p_invariant(self.net, self.invariant(i)):
                raise AssertionError(f"{{{i}, {i + n}}} is not a P-invariant")
        C = self.net.incidence
        for t in range(self.net.num_transitions):
            touched = {p % n for p in range(2 * n) if C[p][t] != 0}
            if touched != {self.variable(t)}:
                raise AssertionError(f"transition {self.net.transitions[t]} modifies {touched}")

    def to_dict(self, marking: Sequence | None = None) -> dict:
        doc = net_to_dict(self.net, marking)
        names = self.bn.names
        doc["encoding"] = {
            "n": self.n,
            "variables": list(names),
            "place_of": {v: [self.net.places[i], self.net.places[i + self.n]] for i, v in enumerate(names)},
            "target_of_transition": {
                self.net.transitions[t]: {"var": names[c.target], "dir": "+" if c.direction > 0 else "-"}
                for t, c in enumerate(self.clauses)
            },
        }
        return doc


def _transition_name(c: Clause, names: Sequence[str]) -> str:
    return f"t_{names[c.target]}{'+' if c.direction > 0 else '-'}:{c.label(names)}"


def _build(f: BooleanNetwork, dnf) -> EncodedNet:
    n = f.n
    names = f.names
    places = tuple(f"{v}=0" for v in names) + tuple(f"{v}=1" for v in names)
    all_clauses = []
    for i in range(n):
        up, down = dnf(f, i)
        all_clauses.extend(up)
        all_clauses.extend(down)
    pre, post = [], []
    for c in all_clauses:
        i = c.target
        tin: dict[int, int] = {}
        tout: dict[int, int] = {}
        if c.direction > 0:
            tin[i], tout[i + n] = 1, 1
        else:
            tin[i + n], tout[i] = 1, 1
        for j, positive in c.literals:
            p = j + n if positive else j
            tin[p] = tout[p] = 1
        pre.append(tin)
        post.append(tout)
    net = Net(places, tuple(_transition_name(c, names) for c in all_clauses), tuple(pre), tuple(post))
    return EncodedNet(f, net, tuple(all_clauses))


@lru_cache(maxsize=512)
def encode(f: BooleanNetwork, dnf: str = "prime") -> EncodedNet:
    """Petri net encoding of ``f``; ``dnf="minterm"`` uses unminimised clauses."""
    if dnf == "prime":
        return _build(f, clauses)
    if dnf == "minterm":
        return _build(f, minterm_clauses)
    raise ValueError(f"unknown DNF mode {dnf!r}")


def size_estimate(f: BooleanNetwork) -> int:
    """Upper bound on the transition count.

    Without a self-loop the rising and falling minterms of ``i`` partition the
    ``2**k`` valuations of its ``k`` other inputs; a self-loop decouples the two
    cofactors and doubles the bound.
    """
    total = 0
    for i in range(f.n):
        ins = f.inputs(i)
        k = len([j for j in ins if j != i])
        total += 2 ** (k + 1) if i in ins else 2 ** k
    return total


def marking_of(x: Sequence[int]) -> tuple[Fraction, ...]:
    """Canonical marking of an MP (or Boolean) configuration; transients split 1/2, 1/2."""
    n = len(x)
    m = [Fraction(0)] * (2 * n)
    for i, v in enumerate(x):
        if v == UP or v == DOWN:
            m[i] = m[i + n] = HALF
        elif v in (0, 1):
            m[i], m[i + n] = Fraction(1 - v), Fraction(v)
        else:
            raise ValueError(f"not an MP value: {v!r}")
    return tuple(m)


def discrete_marking_of(x: Sequence[int]) -> tuple[int, ...]:
    n = len(x)
    M = [0] * (2 * n)
    for i, v in enumerate(x):
        if v not in (0, 1):
            raise ValueError("discrete markings exist only for Boolean configurations")
        M[i + n * v] = 1
    return tuple(M)


def mu_contains(x: Sequence[int], m: Sequence) -> bool:
    n = len(x)
    if len(m) != 2 * n:
        raise ValueError(f"marking has {len(m)} entries, expected {2 * n}")
    for i, v in enumerate(x):
        lo, hi = m[i], m[i + n]
        if lo < 0 or hi < 0 or lo + hi != 1:
            return False
        if v in (0, 1):
            if lo != 1 - v:
                return False
        elif not 0 < lo < 1:
            return False
    return True


def decode_support(m: Sequence) -> tuple[int | None, ...]:
    """Per variable 0, 1, or ``None`` (transient, direction unknown)."""
    if len(m) % 2:
        raise ValueError("encoded markings have an even number of places")
    n = len(m) // 2
    out = []
    for i in range(n):
        lo, hi = m[i], m[i + n]
        if lo < 0 or hi < 0 or lo + hi != 1:
            raise InvariantViolation(f"variable {i}: m_{i} + m_{i + n} = {format_fraction(lo + hi)} != 1")
        out.append(0 if lo == 1 else 1 if hi == 1 else None)
    return tuple(out)


def encoded_to_json(enc: EncodedNet, marking: Sequence | None = None) -> str:
    return json.dumps(enc.to_dict(marking), indent=2)
