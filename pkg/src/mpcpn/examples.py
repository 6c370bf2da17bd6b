"""Small fixtures used in docs, tests and the CLI."""

from __future__ import annotations

from fractions import Fraction

from .network import BooleanNetwork, parse_bn
from .petri import Net

RUNNING_EXAMPLE = """\
x1, !x2
x2, !x1
x3, !x1 & x2
"""


def running_example() -> BooleanNetwork:
    """Three variables: x1 and x2 inhibit each other, x3 needs x2 without x1."""
    return parse_bn(RUNNING_EXAMPLE)


def halving_net() -> tuple[Net, tuple[Fraction, ...]]:
    """Two places; t1 moves mass from p1 to p2, t2 turns two units of p2 into one of p1.

    {p1, p2} is a marked trap, so no finite sequence empties it, yet the
    empty marking is a limit of the halving loop.
    """
    net = Net.build(
        ["p1", "p2"],
        [
            ("t1", {"p1": 1}, {"p2": 1}),
            ("t2", {"p2": 2}, {"p1": 1}),
        ],
    )
    return net, (Fraction(1), Fraction(0))
