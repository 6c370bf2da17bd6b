"""Place/transition nets with discrete and continuous (exact rational) token games."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Net",
    "Marking",
    "FiringError",
    "ExplorationCapExceeded",
    "DiscreteReach",
    "INF",
    "support",
    "enabling_degree",
    "fire_continuous",
    "fire_discrete",
    "is_enabled_discrete",
    "discrete_reach",
    "is_trap",
    "is_siphon",
    "check_p_invariant",
    "parse_fraction",
    "format_fraction",
    "net_to_dict",
    "net_from_dict",
    "net_to_json",
    "net_from_json",
    "net_to_dot",
]

Marking = tuple  # place-indexed; Fraction entries (continuous) or int entries (discrete)
INF = float("inf")


class FiringError(ValueError):
    """Illegal firing: transition not enabled, or firing amount out of range."""


class ExplorationCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Net:
    """Finite net; ``pre[t]`` / ``post[t]`` map place index to positive arc weight."""

    places: tuple[str, ...]
    transitions: tuple[str, ...]
    pre: tuple[Mapping[int, int], ...]
    post: tuple[Mapping[int, int], ...]

    def __post_init__(self):
        if len(self.pre) != len(self.transitions) or len(self.post) != len(self.transitions):
            raise ValueError("pre/post maps must be given for every transition")
        if len(set(self.places)) != len(self.places):
            raise ValueError("place names must be distinct")
        if len(set(self.transitions)) != len(self.transitions):
            raise ValueError("transition names must be distinct")
        for arcs in self.pre + self.post:
            for p, w in arcs.items():
                if not 0 <= p < len(self.places):
                    raise ValueError(f"place index {p} out of range")
                if not isinstance(w, int) or w <= 0:
                    raise ValueError("arc weights must be positive integers (absent arcs have weight 0)")
        # freeze the arc maps so the net is hashable and immutable
        object.__setattr__(self, "pre", tuple(_FrozenArcs(a) for a in self.pre))
        object.__setattr__(self, "post", tuple(_FrozenArcs(a) for a in self.post))

    @classmethod
    def build(cls, places: Sequence[str], transitions: Iterable[tuple[str, Mapping[str, int], Mapping[str, int]]]):
        """Construct from place names and ``(name, {place: w}, {place: w})`` triples."""
        index = {p: k for k, p in enumerate(places)}
        names, pre, post = [], [], []
        for name, tin, tout in transitions:
            names.append(name)
            pre.append({index[p]: int(w) for p, w in tin.items() if w})
            post.append({index[p]: int(w) for p, w in tout.items() if w})
        return cls(tuple(places), tuple(names), tuple(pre), tuple(post))

    @property
    def num_places(self) -> int:
        return len(self.places)

    @property
    def num_transitions(self) -> int:
        return len(self.transitions)

    def place(self, name: str) -> int:
        return self.places.index(name)

    def transition(self, name: str) -> int:
        return self.transitions.index(name)

    def weight(self, source: str, target: str) -> int:
        """``W(x, y)`` addressed by names (place->transition or transition->place)."""
        if source in self.places:
            return self.pre[self.transition(target)].get(self.place(source), 0)
        return self.post[self.transition(source)].get(self.place(target), 0)

    def preset(self, t: int) -> frozenset[int]:
        return frozenset(self.pre[t])

    def postset(self, t: int) -> frozenset[int]:
        return frozenset(self.post[t])

    def place_preset(self, places: Iterable[int]) -> frozenset[int]:
        """Transitions producing into any of ``places``."""
        ps = set(places)
        return frozenset(t for t in range(self.num_transitions) if ps & self.post[t].keys())

    def place_postset(self, places: Iterable[int]) -> frozenset[int]:
        """Transitions consuming from any of ``places``."""
        ps = set(places)
        return frozenset(t for t in range(self.num_transitions) if ps & self.pre[t].keys())

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Token-flow matrix ``C[p][t] = W(t, p) - W(p, t)``."""
        return tuple(
            tuple(self.post[t].get(p, 0) - self.pre[t].get(p, 0) for t in range(self.num_transitions))
            for p in range(self.num_places)
        )

    def zero_marking(self) -> Marking:
        return tuple(Fraction(0) for _ in self.places)

    def marking(self, values: Mapping[str, object]) -> Marking:
        out = [Fraction(0)] * self.num_places
        for name, v in values.items():
            out[self.place(name)] = parse_fraction(v)
        return tuple(out)


class _FrozenArcs(dict):
    def __hash__(self):
        return hash(tuple(sorted(self.items())))

    def _readonly(self, *args, **kwargs):
        raise TypeError("arc maps are immutable")

    __setitem__ = __delitem__ = clear = pop = popitem = setdefault = update = _readonly


def support(m: Sequence) -> frozenset[int]:
    return frozenset(p for p, v in enumerate(m) if v > 0)


def _check_marking(net: Net, m: Sequence) -> None:
    if len(m) != net.num_places:
        raise ValueError(f"marking has {len(m)} entries, net has {net.num_places} places")


def enabling_degree(net: Net, m: Sequence, t: int):
    """``min m(p)/W(p,t)`` over the preset; ``INF`` for an empty preset."""
    _check_marking(net, m)
    pre = net.pre[t]
    if not pre:
        return INF
    return min(Fraction(m[p]) / w for p, w in pre.items())


def fire_continuous(net: Net, m: Sequence, alpha, t: int) -> Marking:
    alpha = Fraction(alpha)
    if alpha < 0:
        raise FiringError(f"firing amount {alpha} is negative")
    enab = enabling_degree(net, m, t)
    if alpha > enab:
        raise FiringError(f"{net.transitions[t]} cannot fire by {alpha}: enabling degree is {enab}")
    out = [Fraction(v) for v in m]
    for p, w in net.pre[t].items():
        out[p] -= alpha * w
    for p, w in net.post[t].items():
        out[p] += alpha * w
    return tuple(out)


def is_enabled_discrete(net: Net, M: Sequence[int], t: int) -> bool:
    return all(M[p] >= w for p, w in net.pre[t].items())


def fire_discrete(net: Net, M: Sequence[int], t: int) -> Marking:
    _check_marking(net, M)
    if not is_enabled_discrete(net, M, t):
        raise FiringError(f"{net.transitions[t]} is not enabled")
    out = list(M)
    for p, w in net.pre[t].items():
        out[p] -= w
    for p, w in net.post[t].items():
        out[p] += w
    return tuple(out)


@dataclass(frozen=True)
class DiscreteReach:
    markings: tuple[Marking, ...]  # BFS discovery order
    edges: tuple[tuple[int, int, int], ...]  # (source index, transition, target index)
    deadlocks: tuple[Marking, ...]
    safe: bool

    def __contains__(self, M) -> bool:
        return tuple(M) in set(self.markings)


def discrete_reach(net: Net, M0: Sequence[int], cap: int = 100_000) -> DiscreteReach:
    M0 = tuple(int(v) for v in M0)
    _check_marking(net, M0)
    index = {M0: 0}
    order = [M0]
    edges = []
    deadlocks = []
    queue = deque([M0])
    while queue:
        M = queue.popleft()
        fired = False
        for t in range(net.num_transitions):
            if not is_enabled_discrete(net, M, t):
                continue
            fired = True
            M2 = fire_discrete(net, M, t)
            if M2 not in index:
                if len(order) >= cap:
                    raise ExplorationCapExceeded(f"more than {cap} reachable markings; the net may be unbounded")
                index[M2] = len(order)
                order.append(M2)
                queue.append(M2)
            edges.append((index[M], t, index[M2]))
        if not fired:
            deadlocks.append(M)
    safe = all(v <= 1 for M in order for v in M)
    return DiscreteReach(tuple(order), tuple(edges), tuple(deadlocks), safe)


def is_trap(net: Net, S: Iterable[int]) -> bool:
    """``S•`` contained in ``•S``: every consumer of S also produces into S."""
    S = set(S)
    return net.place_postset(S) <= net.place_preset(S)


def is_siphon(net: Net, S: Iterable[int]) -> bool:
    """``•S`` contained in ``S•``."""
    S = set(S)
    return net.place_preset(S) <= net.place_postset(S)


def check_p_invariant(net: Net, v: Sequence[int]) -> bool:
    if len(v) != net.num_places:
        raise ValueError("invariant vector must have one entry per place")
    C = net.incidence
    return all(sum(v[p] * C[p][t] for p in range(net.num_places)) == 0 for t in range(net.num_transitions))


# -- serialisation -------------------------------------------------------------


def parse_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not token masses")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"token mass must be an integer or a 'num/den' string, got {value!r}")


def format_fraction(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def net_to_dict(net: Net, marking: Sequence | None = None) -> dict:
    doc = {
        "places": list(net.places),
        "transitions": [
            {
                "name": name,
                "pre": {net.places[p]: w for p, w in sorted(net.pre[t].items())},
                "post": {net.places[p]: w for p, w in sorted(net.post[t].items())},
            }
            for t, name in enumerate(net.transitions)
        ],
    }
    if marking is not None:
        doc["marking"] = {net.places[p]: format_fraction(v) for p, v in enumerate(marking) if v != 0}
    return doc


def net_from_dict(doc: Mapping) -> tuple[Net, Marking | None]:
    try:
        places = list(doc["places"])
        transitions = [(t["name"], t.get("pre", {}), t.get("post", {})) for t in doc["transitions"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed net document: {exc}") from None
    for _, tin, tout in transitions:
        for p in list(tin) + list(tout):
            if p not in places:
                raise ValueError(f"arc refers to unknown place {p!r}")
    net = Net.build(places, transitions)
    marking = net.marking(doc["marking"]) if "marking" in doc else None
    return net, marking


def net_to_json(net: Net, marking: Sequence | None = None, extra: Mapping | None = None) -> str:
    doc = net_to_dict(net, marking)
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2)


def net_from_json(text: str) -> tuple[Net, Marking | None]:
    return net_from_dict(json.loads(text))


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def net_to_dot(net: Net, marking: Sequence | None = None, name: str = "net") -> str:
    """Graphviz rendering: circles for places, boxes for transitions, weight-1 labels omitted."""
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=LR;"]
    for p, pname in enumerate(net.places):
        label = pname
        if marking is not None and marking[p] != 0:
            label += f"\\n{format_fraction(marking[p])}"
        lines.append(f"  {_dot_id('p:' + pname)} [shape=circle, label={_dot_id(label)}];")
    for t, tname in enumerate(net.transitions):
        lines.append(f"  {_dot_id('t:' + tname)} [shape=box, label={_dot_id(tname)}];")
    for t, tname in enumerate(net.transitions):
        pre, post = net.pre[t], net.post[t]
        for p in sorted(set(pre) | set(post)):
            src, dst = _dot_id("p:" + net.places[p]), _dot_id("t:" + tname)
            if pre.get(p) and pre.get(p) == post.get(p):
                attrs = ["dir=both"] + ([f'label="{pre[p]}"'] if pre[p] != 1 else [])
                lines.append(f"  {src} -> {dst} [{', '.join(attrs)}];")
                continue
            if p in pre:
                lbl = f' [label="{pre[p]}"]' if pre[p] != 1 else ""
                lines.append(f"  {src} -> {dst}{lbl};")
            if p in post:
                lbl = f' [label="{post[p]}"]' if post[p] != 1 else ""
                lines.append(f"  {dst} -> {src}{lbl};")
    lines.append("}")
    return "\n".join(lines) + "\n"
