"""Support-level abstractions of continuous nets: modes, ARG and SRT.

Abstract reachability graph (ARG)::

    nodes   supports reachable from the initial support
    edges   S -> S' for
            * a single firing from a marking with support S: partial firing
              gives S | t•, firing up to the enabling degree gives
              (S - Q) | t• for each nonempty Q within •t - t•;
            * a limit move that stays inside class S and drains the places Z:
              some v >= 0 over transitions living in S with (C v)(p) < 0 on Z
              (decided exactly by linear programming), giving S - Z.
    kind    "border" when the target's mode is strictly smaller (transitions
            become permanently disabled), "anonymous" otherwise.

The symbolic reachability tree (SRT) groups ARG nodes of equal mode that are
connected by anonymous edges; its children follow border edges, so modes
shrink strictly along every branch.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import linprog
from .petri import Net, support

__all__ = [
    "Mode",
    "ArgEdge",
    "SupportGraph",
    "SRTNode",
    "ModeTree",
    "NodeCapExceeded",
    "max_firing_set",
    "build_arg",
    "build_srt",
    "state_equation_feasible",
    "drainable",
]


class NodeCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Mode:
    transitions: frozenset[int]
    support: frozenset[int]


def max_firing_set(net: Net, places: Iterable[int]) -> Mode:
    """Least fixed point: add every transition whose preset is marked, then its postset."""
    S = set(places)
    fired: set[int] = set()
    changed = True
    while changed:
        changed = False
        for t in range(net.num_transitions):
            if t not in fired and net.pre[t].keys() <= S:
                fired.add(t)
                S |= net.post[t].keys()
                changed = True
    return Mode(frozenset(fired), frozenset(S))


def state_equation_feasible(net: Net, m0: Sequence, m1: Sequence, transitions: Iterable[int]) -> bool:
    """Is ``m1 = m0 + C v`` solvable with rational ``v >= 0`` supported on ``transitions``?"""
    ts = sorted(set(transitions))
    C = net.incidence
    A = [[C[p][t] for t in ts] for p in range(net.num_places)]
    b = [Fraction(m1[p]) - Fraction(m0[p]) for p in range(net.num_places)]
    if not ts:
        return all(v == 0 for v in b)
    return linprog.feasible(A_eq=A, b_eq=b, num_vars=len(ts)) is not None


def drainable(net: Net, S: frozenset[int], Z: Iterable[int]) -> tuple[Fraction, ...] | None:
    """Flow vector emptying ``Z`` in the limit without leaving support ``S``, if one exists."""
    inner = [t for t in range(net.num_transitions) if (net.pre[t].keys() | net.post[t].keys()) <= S]
    if not inner:
        return None
    C = net.incidence
    Z = sorted(Z)
    A = [[C[p][t] for t in inner] for p in Z]
    return linprog.feasible(A_ub=A, b_ub=[-1] * len(Z), num_vars=len(inner))


@dataclass(frozen=True)
class ArgEdge:
    source: int
    target: int
    kind: str  # "anonymous" | "border"
    transitions: tuple[int, ...]  # witnessing single firings
    limit: tuple[int, ...] = ()  # transitions of a witnessing limit move, if any


@dataclass(frozen=True)
class SupportGraph:
    net: Net
    nodes: tuple[frozenset[int], ...]
    modes: tuple[frozenset[int], ...]
    edges: tuple[ArgEdge, ...]

    def index(self, S: Iterable[int]) -> int:
        return self.nodes.index(frozenset(S))

    def border_edges(self) -> list[ArgEdge]:
        return [e for e in self.edges if e.kind == "border"]

    def out_edges(self, k: int) -> list[ArgEdge]:
        return [e for e in self.edges if e.source == k]

    def names(self, S: Iterable[int]) -> list[str]:
        return [self.net.places[p] for p in sorted(S)]

    def to_dict(self) -> dict:
        tname = self.net.transitions
        return {
            "nodes": [
                {"id": k, "support": self.names(S), "mode": sorted(tname[t] for t in self.modes[k])}
                for k, S in enumerate(self.nodes)
            ],
            "edges": [
                {
                    "source": e.source,
                    "target": e.target,
                    "kind": e.kind,
                    "transitions": [tname[t] for t in e.transitions],
                    "limit": [tname[t] for t in e.limit],
                }
                for e in self.edges
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_dot(self) -> str:
        lines = ["digraph arg {"]
        for k, S in enumerate(self.nodes):
            label = "{" + ",".join(self.names(S)) + "}"
            lines.append(f'  n{k} [shape=ellipse, label="{label}"];')
        for e in self.edges:
            style = ' [color="black:invis:black"]' if e.kind == "border" else ""
            lines.append(f"  n{e.source} -> n{e.target}{style};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _successors(net: Net, S: frozenset[int]) -> dict[frozenset[int], tuple[list[int], list[int]]]:
    out: dict[frozenset[int], tuple[list[int], list[int]]] = {}

    def add(target: Iterable[int], t: int | None, lim: Sequence[int] = ()):
        target = frozenset(target)
        if target == S:
            return
        fin, lims = out.setdefault(target, ([], []))
        if t is not None and t not in fin:
            fin.append(t)
        for u in lim:
            if u not in lims:
                lims.append(u)

    for t in range(net.num_transitions):
        pre, post = net.pre[t].keys(), net.post[t].keys()
        if not pre <= S:
            continue
        add(S | post, t)
        emptied = sorted(pre - post)
        for k in range(1, len(emptied) + 1):
            for Q in combinations(emptied, k):
                add((S - set(Q)) | post, t)

    inner = [t for t in range(net.num_transitions) if (net.pre[t].keys() | net.post[t].keys()) <= S]
    C = net.incidence
    candidates = sorted(p for p in S if any(C[p][t] < 0 for t in inner))
    infeasible: list[frozenset[int]] = []
    for k in range(1, len(candidates) + 1):
        for Z in combinations(candidates, k):
            Zs = frozenset(Z)
            if any(bad <= Zs for bad in infeasible):
                continue
            v = drainable(net, S, Z)
            if v is None:
                infeasible.append(Zs)
                continue
            add(S - Zs, None, [t for t, a in zip(inner, v) if a > 0])
    return out


def build_arg(net: Net, m0: Sequence, cap: int = 10_000) -> SupportGraph:
    start = support(m0)
    nodes = [start]
    index = {start: 0}
    modes = [max_firing_set(net, start).transitions]
    edges: list[ArgEdge] = []
    queue = deque([start])
    while queue:
        S = queue.popleft()
        k = index[S]
        succ = _successors(net, S)
        for T in sorted(succ, key=lambda s: (len(s), sorted(s))):
            if T not in index:
                if len(nodes) >= cap:
                    raise NodeCapExceeded(f"ARG exceeds {cap} nodes")
                index[T] = len(nodes)
                nodes.append(T)
                modes.append(max_firing_set(net, T).transitions)
                queue.append(T)
            j = index[T]
            if not modes[j] <= modes[k]:
                raise AssertionError("mode grew along an ARG edge")
            kind = "border" if modes[j] < modes[k] else "anonymous"
            fin, lim = succ[T]
            edges.append(ArgEdge(k, j, kind, tuple(fin), tuple(sorted(lim))))
    return SupportGraph(net, tuple(nodes), tuple(modes), tuple(edges))


@dataclass
class SRTNode:
    mode: frozenset[int]
    entry: int  # ARG node the class is entered at
    members: tuple[int, ...]  # ARG nodes of the class
    depth: int
    children: list[tuple[ArgEdge, "SRTNode"]] = field(default_factory=list)


@dataclass
class ModeTree:
    arg: SupportGraph
    root: SRTNode

    def walk(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(child for _, child in reversed(node.children))

    def leaves(self) -> list[SRTNode]:
        return [node for node in self.walk() if not node.children]

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def depth(self) -> int:
        return max(node.depth for node in self.walk())

    def check(self) -> None:
        nt = self.arg.net.num_transitions
        for node in self.walk():
            if node.depth > nt:
                raise AssertionError("SRT deeper than the number of transitions")
            for _, child in node.children:
                if not child.mode < node.mode:
                    raise AssertionError("child mode is not strictly smaller than its parent")

    def _node_dict(self, node: SRTNode) -> dict:
        net = self.arg.net
        return {
            "mode": sorted(net.transitions[t] for t in node.mode),
            "entry": self.arg.names(self.arg.nodes[node.entry]),
            "supports": [self.arg.names(self.arg.nodes[k]) for k in node.members],
            "children": [
                {
                    "border": {
                        "from": self.arg.names(self.arg.nodes[e.source]),
                        "to": self.arg.names(self.arg.nodes[e.target]),
                    },
                    "node": self._node_dict(child),
                }
                for e, child in node.children
            ],
        }

    def to_dict(self) -> dict:
        return self._node_dict(self.root)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_dot(self) -> str:
        net = self.arg.net
        lines = ["digraph srt {"]
        ids: dict[int, str] = {}
        for k, node in enumerate(self.walk()):
            ids[id(node)] = f"s{k}"
            label = "{" + ",".join(net.transitions[t] for t in sorted(node.mode)) + "}"
            lines.append(f'  s{k} [shape=box, label="{label}\\n{len(node.members)} supports"];')
        for node in self.walk():
            for e, child in node.children:
                lines.append(f'  {ids[id(node)]} -> {ids[id(child)]} [color="black:invis:black"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_srt(net: Net, m0: Sequence, arg: SupportGraph | None = None, cap: int = 100_000) -> ModeTree:
    if arg is None:
        arg = build_arg(net, m0)
    start = arg.index(support(m0))
    count = 0

    def klass(entry: int) -> list[int]:
        seen = [entry]
        queue = deque([entry])
        while queue:
            k = queue.popleft()
            for e in arg.out_edges(k):
                if e.kind == "anonymous" and e.target not in seen:
                    seen.append(e.target)
                    queue.append(e.target)
        return sorted(seen)

    def grow(entry: int, depth: int) -> SRTNode:
        nonlocal count
        count += 1
        if count > cap:
            raise NodeCapExceeded(f"SRT exceeds {cap} nodes")
        members = klass(entry)
        node = SRTNode(arg.modes[entry], entry, tuple(members), depth)
        for k in members:
            for e in arg.out_edges(k):
                if e.kind == "border":
                    node.children.append((e, grow(e.target, depth + 1)))
        return node

    tree = ModeTree(arg, grow(start, 0))
    tree.check()
    return tree
