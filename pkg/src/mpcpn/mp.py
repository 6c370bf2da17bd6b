"""Most-permissive semantics: four-valued configurations and their reachability.

An MP configuration is a tuple over ``{0, 1, UP, DOWN}`` (textual form
``0``, ``1``, ``+``, ``-``).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .boolexpr import evaluate
from .network import BooleanNetwork, Config, code_config, difference

__all__ = [
    "MPValue",
    "UP",
    "DOWN",
    "MPConfig",
    "MPStep",
    "ThreePhaseWitness",
    "MAX_MP_VARS",
    "parse_mp",
    "format_mp",
    "is_transient",
    "target",
    "binarisations",
    "mp_step_successors",
    "mp_reach",
    "mp_reach_boolean",
    "three_phase_witness",
    "three_phase_witnesses",
    "replay",
]

MAX_MP_VARS = 10


class MPValue(IntEnum):
    ZERO = 0
    ONE = 1
    UP = 2
    DOWN = 3

    def __str__(self):
        return "01+-"[self]


UP = MPValue.UP
DOWN = MPValue.DOWN
MPConfig = tuple[int, ...]
MPStep = tuple[int, int]  # (variable, new value)

_CHARS = {"0": 0, "1": 1, "+": 2, "-": 3}


def parse_mp(text: str, n: int | None = None) -> MPConfig:
    text = text.strip()
    if not text or set(text) - set(_CHARS):
        raise ValueError(f"MP configuration must use characters 0 1 + -, got {text!r}")
    if n is not None and len(text) != n:
        raise ValueError(f"MP configuration {text!r} has length {len(text)}, expected {n}")
    return tuple(_CHARS[c] for c in text)


def format_mp(x: Iterable[int]) -> str:
    return "".join("01+-"[v] for v in x)


def is_transient(v: int) -> bool:
    return v >= 2


def target(v: int) -> int:
    """Boolean value a transient collapses onto (identity on Booleans)."""
    return {0: 0, 1: 1, 2: 1, 3: 0}[v]


def binarisations(x: Sequence[int]) -> list[Config]:
    slots = [(0, 1) if v >= 2 else (v,) for v in x]
    return sorted(product(*slots))


def _can_reach_value(f: BooleanNetwork, i: int, x: Sequence[int], want: int) -> bool:
    return any(int(evaluate(f.functions[i], b)) == want for b in binarisations(x))


def mp_step_successors(f: BooleanNetwork, x: Sequence[int]) -> list[MPConfig]:
    """All single-variable MP updates of ``x`` (``x`` itself excluded), sorted."""
    x = tuple(int(v) for v in x)
    if len(x) != f.n:
        raise ValueError(f"configuration has length {len(x)}, network has n={f.n}")
    out = []
    for i, v in enumerate(x):
        news = []
        if v == UP:
            news.append(1)
        if v == DOWN:
            news.append(0)
        if v != 1 and v != UP and _can_reach_value(f, i, x, 1):
            news.append(UP)
        if v != 0 and v != DOWN and _can_reach_value(f, i, x, 0):
            news.append(DOWN)
        for w in news:
            out.append(x[:i] + (w,) + x[i + 1:])
    return sorted(out)


# -- integer state encoding used by the kernels -------------------------------


def state_code(x: Sequence[int]) -> int:
    n = len(x)
    v = tm = 0
    for i, val in enumerate(x):
        if val >= 2:
            tm |= 1 << i
        if target(val):
            v |= 1 << i
    return v | (tm << n)


def code_state(s: int, n: int) -> MPConfig:
    v = s & ((1 << n) - 1)
    tm = s >> n
    out = []
    for i in range(n):
        b = (v >> i) & 1
        out.append((UP if b else DOWN) if tm >> i & 1 else b)
    return tuple(int(c) for c in out)


class _Tables:
    """Binarisation-existence tables of a network, as bytes rows for fast lookup."""

    def __init__(self, f: BooleanNetwork):
        if f.n > MAX_MP_VARS:
            raise ValueError(f"MP state exploration is limited to n <= {MAX_MP_VARS}")
        self.n = f.n
        self.e0, self.e1 = kernels.exists_tables(np.ascontiguousarray(f.table))
        self.rows0 = [bytes(r) for r in self.e0]
        self.rows1 = [bytes(r) for r in self.e1]


@lru_cache(maxsize=256)
def _tables(f: BooleanNetwork) -> _Tables:
    return _Tables(f)


def mp_reach(f: BooleanNetwork, x: Sequence[int]) -> list[MPConfig]:
    """Every MP configuration reachable from ``x`` (Boolean or not), sorted."""
    t = _tables(f)
    visited = kernels.mp_reach(t.e0, t.e1, f.n, state_code(x))
    return sorted(code_state(s, f.n) for s in np.flatnonzero(visited))


def mp_reach_boolean(f: BooleanNetwork, x: Sequence[int]) -> list[Config]:
    """Boolean configurations MP-reachable from Boolean ``x``, sorted."""
    if any(v >= 2 for v in x):
        raise ValueError("mp_reach_boolean expects a Boolean start configuration")
    t = _tables(f)
    visited = kernels.mp_reach(t.e0, t.e1, f.n, state_code(x))
    size = 1 << f.n
    return sorted(code_config(c, f.n) for c in np.flatnonzero(visited[:size]))


def replay(f: BooleanNetwork, x: Sequence[int], steps: Iterable[MPStep]) -> list[MPConfig]:
    """Apply ``steps`` from ``x``, checking each against :func:`mp_step_successors`."""
    path = [tuple(int(v) for v in x)]
    for i, w in steps:
        cur = path[-1]
        nxt = cur[:i] + (int(w),) + cur[i + 1:]
        if nxt not in mp_step_successors(f, cur):
            raise ValueError(f"illegal MP step: variable {i} to {format_mp([w])} from {format_mp(cur)}")
        path.append(nxt)
    return path


@dataclass(frozen=True)
class ThreePhaseWitness:
    """MP path split into rise-to-transient, transient-flip and collapse phases."""

    x: Config
    y: Config
    phase1: tuple[MPStep, ...]
    phase2: tuple[MPStep, ...]
    phase3: tuple[MPStep, ...]

    def steps(self) -> tuple[MPStep, ...]:
        return self.phase1 + self.phase2 + self.phase3

    def path(self, f: BooleanNetwork) -> list[MPConfig]:
        return replay(f, self.x, self.steps())

    @property
    def peak(self) -> MPConfig:
        """Configuration at the end of the first phase."""
        z = list(self.x)
        for i, w in self.phase1:
            z[i] = w
        return tuple(z)

    def validate(self, f: BooleanNetwork) -> None:
        path = self.path(f)
        if path[-1] != tuple(self.y):
            raise ValueError("witness does not end at its target")
        for name, phase in (("phase1", self.phase1), ("phase2", self.phase2), ("phase3", self.phase3)):
            touched = [i for i, _ in phase]
            if len(set(touched)) != len(touched):
                raise ValueError(f"a variable changes twice in {name}")
        k = 0
        for kind, phase in ((1, self.phase1), (2, self.phase2), (3, self.phase3)):
            for _ in phase:
                before, after = path[k], path[k + 1]
                (i,) = difference(before, after)
                if _step_kind(before[i], after[i]) != kind:
                    raise ValueError(f"step {k} does not belong to phase {kind}")
                k += 1


def _step_kind(old: int, new: int) -> int:
    if old < 2:
        return 1
    return 2 if new >= 2 else 3


def three_phase_witnesses(
    f: BooleanNetwork, x: Sequence[int], *, self_pinned: bool = False
) -> dict[Config, ThreePhaseWitness]:
    """Shortest three-phase witness from ``x`` to every MP-reachable Boolean configuration.

    Breadth-first search over ``(phase, state)``: a step of phase ``k`` moves
    to phase ``k``, so phases only advance. Successors are expanded by phase,
    then variable, which fixes ties.

    With ``self_pinned`` a transient flip of variable ``i`` must be justified
    by a binarisation that reads ``i`` at the value it was heading to. This is
    the restriction the net encoding can realise; the plain MP relation lets
    ``i`` read its own opposite value.
    """
    x = tuple(int(v) for v in x)
    if any(v >= 2 for v in x):
        raise ValueError("witness search expects a Boolean start configuration")
    t = _tables(f)
    n = f.n
    start = (1, state_code(x))
    parent: dict[tuple[int, int], tuple[tuple[int, int], int, int] | None] = {start: None}
    queue = deque([start])
    found: dict[int, tuple[int, int]] = {start[1]: start}
    while queue:
        node = queue.popleft()
        phase, s = node
        v = s & ((1 << n) - 1)
        tm = s >> n
        for kind in range(phase, 4):
            for i in range(n):
                b = 1 << i
                high = v & b
                nxt = -1
                if kind == 1 and not tm & b:
                    if high and t.rows0[i][s]:
                        nxt = (s & ~b) | (b << n)
                    elif not high and t.rows1[i][s]:
                        nxt = s | b | (b << n)
                elif kind == 2 and tm & b:
                    probe = s & ~(b << n) if self_pinned else s
                    if (t.rows0 if high else t.rows1)[i][probe]:
                        nxt = s ^ b
                elif kind == 3 and tm & b:
                    nxt = s & ~(b << n)
                if nxt < 0:
                    continue
                child = (kind, nxt)
                if child in parent:
                    continue
                parent[child] = (node, i, nxt)
                queue.append(child)
                if nxt >> n == 0 and nxt not in found:
                    found[nxt] = child
    out = {}
    for code, node in found.items():
        phases: dict[int, list[MPStep]] = {1: [], 2: [], 3: []}
        while parent[node] is not None:
            prev, i, s = parent[node]
            phases[node[0]].append((i, code_state(s, n)[i]))
            node = prev
        y = code_config(code, n)
        out[y] = ThreePhaseWitness(
            x, y, tuple(reversed(phases[1])), tuple(reversed(phases[2])), tuple(reversed(phases[3]))
        )
    return dict(sorted(out.items()))


def three_phase_witness(
    f: BooleanNetwork, x: Sequence[int], y: Sequence[int], *, self_pinned: bool = False
) -> ThreePhaseWitness | None:
    return three_phase_witnesses(f, x, self_pinned=self_pinned).get(tuple(int(b) for b in y))
