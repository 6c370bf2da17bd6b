"""Boolean networks and their classical update semantics.

Variables are indexed ``0..n-1`` in declaration order. A configuration is a
tuple of 0/1 ints; ``"011"`` strings are the textual form (variable 0 first).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .boolexpr import BoolExpr, evaluate, evaluate_table, parse_declarations, to_text, variables

__all__ = [
    "BooleanNetwork",
    "Config",
    "SEMANTICS",
    "parse_bn",
    "eval_local",
    "step_successors",
    "reach_set",
    "fixed_points",
    "parse_config",
    "format_config",
    "config_code",
    "code_config",
    "difference",
]

Config = tuple[int, ...]
SEMANTICS = ("fa", "syn", "ga")
_MODE = {"fa": kernels.FA, "syn": kernels.SYN, "ga": kernels.GA}
MAX_TABLE_VARS = 20


@dataclass(frozen=True)
class BooleanNetwork:
    names: tuple[str, ...]
    functions: tuple[BoolExpr, ...]

    def __post_init__(self):
        if not self.names:
            raise ValueError("a Boolean network needs at least one variable")
        if len(self.names) != len(self.functions):
            raise ValueError("exactly one local function per variable is required")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be pairwise distinct")
        n = len(self.names)
        for f in self.functions:
            bad = [j for j in variables(f) if not 0 <= j < n]
            if bad:
                raise ValueError(f"variable index {bad[0]} out of range for n={n}")

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def inputs(self, i: int) -> tuple[int, ...]:
        return tuple(sorted(variables(self.functions[i])))

    def to_text(self) -> str:
        return "".join(f"{name}, {to_text(f, self.names)}\n" for name, f in zip(self.names, self.functions))

    @cached_property
    def table(self) -> np.ndarray:
        """``uint8[n, 2**n]`` truth tables, column ``k`` being configuration code ``k``."""
        if self.n > MAX_TABLE_VARS:
            raise ValueError(f"truth tables are limited to n <= {MAX_TABLE_VARS}")
        return np.stack([evaluate_table(f, self.n) for f in self.functions])

    @cached_property
    def image(self) -> np.ndarray:
        """Code of ``f(x)`` for every configuration code ``x``."""
        weights = np.int64(1) << np.arange(self.n, dtype=np.int64)
        return (self.table.astype(np.int64) * weights[:, None]).sum(axis=0)

    def __call__(self, x: Sequence[int]) -> Config:
        return tuple(int(evaluate(f, x)) for f in self.functions)


def parse_bn(text: str) -> BooleanNetwork:
    names, functions = parse_declarations(text)
    return BooleanNetwork(names, functions)


def parse_config(text: str, n: int | None = None) -> Config:
    text = text.strip()
    if not text or set(text) - {"0", "1"}:
        raise ValueError(f"configuration must be a 0/1 string, got {text!r}")
    if n is not None and len(text) != n:
        raise ValueError(f"configuration {text!r} has length {len(text)}, expected {n}")
    return tuple(int(c) for c in text)


def format_config(x: Iterable[int]) -> str:
    return "".join(str(int(b)) for b in x)


def config_code(x: Sequence[int]) -> int:
    code = 0
    for i, b in enumerate(x):
        if b:
            code |= 1 << i
    return code


def code_config(code: int, n: int) -> Config:
    return tuple((int(code) >> i) & 1 for i in range(n))


def difference(x: Sequence, y: Sequence) -> frozenset[int]:
    """Indices where ``x`` and ``y`` disagree."""
    return frozenset(i for i, (a, b) in enumerate(zip(x, y)) if a != b)


def _check(f: BooleanNetwork, x: Sequence[int]) -> Config:
    if len(x) != f.n:
        raise ValueError(f"configuration has length {len(x)}, network has n={f.n}")
    return tuple(int(b) for b in x)


def eval_local(f: BooleanNetwork, i: int, x: Sequence[int]) -> int:
    if not 0 <= i < f.n:
        raise IndexError(f"variable index {i} out of range for n={f.n}")
    return int(evaluate(f.functions[i], _check(f, x)))


def step_successors(f: BooleanNetwork, mode: str, x: Sequence[int]) -> list[Config]:
    """One-step successors of ``x``, sorted lexicographically."""
    x = _check(f, x)
    fx = f(x)
    unstable = [i for i in range(f.n) if fx[i] != x[i]]
    if mode == "syn":
        return [fx]
    if mode == "fa":
        out = []
        for i in unstable:
            y = list(x)
            y[i] = fx[i]
            out.append(tuple(y))
        return sorted(out)
    if mode == "ga":
        out = []
        for mask in range(1 << len(unstable)):
            y = list(x)
            for k, i in enumerate(unstable):
                if mask >> k & 1:
                    y[i] = fx[i]
            out.append(tuple(y))
        return sorted(out)
    raise ValueError(f"unknown semantics {mode!r}; expected one of {SEMANTICS}")


def reach_set(f: BooleanNetwork, mode: str, x: Sequence[int]) -> list[Config]:
    """Reflexive-transitive closure of :func:`step_successors`, sorted."""
    x = _check(f, x)
    if mode not in _MODE:
        raise ValueError(f"unknown semantics {mode!r}; expected one of {SEMANTICS}")
    visited = kernels.async_reach(f.image, f.n, config_code(x), _MODE[mode])
    return sorted(code_config(c, f.n) for c in np.flatnonzero(visited))


def fixed_points(f: BooleanNetwork) -> list[Config]:
    codes = np.arange(1 << f.n, dtype=np.int64)
    return sorted(code_config(c, f.n) for c in codes[f.image == codes])
