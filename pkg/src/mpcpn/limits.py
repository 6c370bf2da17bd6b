"""Constructive correspondence between MP reachability and limit reachability.

* :func:`construct_lim_sequence` turns a three-phase MP witness into a
  finite description of an infinite firing sequence of the encoded
  continuous net converging to the target marking.
* :func:`abstract_sequence` turns a firing sequence of the encoded net into
  an MP path that makes exactly the touched variables transient.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .encoding import HALF, EncodedNet, decode_support, encode, marking_of
from .mp import DOWN, UP, MPStep, ThreePhaseWitness, format_mp, replay, three_phase_witness
from .network import BooleanNetwork
from .petri import FiringError, enabling_degree, fire_continuous, format_fraction, parse_fraction

__all__ = [
    "FiringEvent",
    "LimSequence",
    "LimReachVerdict",
    "CertificateError",
    "construct_lim_sequence",
    "abstract_sequence",
    "abstract_to_support",
    "mp_limreach",
    "certify",
    "replay_events",
]


class CertificateError(AssertionError):
    """A constructed certificate failed its own replay check."""


@dataclass(frozen=True)
class FiringEvent:
    alpha: Fraction
    transition: int


def _events(prefix: Iterable) -> list[FiringEvent]:
    out = []
    for ev in prefix:
        if isinstance(ev, FiringEvent):
            out.append(ev)
        else:
            alpha, t = ev
            out.append(FiringEvent(parse_fraction(alpha) if not isinstance(alpha, Fraction) else alpha, int(t)))
    return out


def replay_events(enc: EncodedNet, m0: Sequence, prefix: Iterable) -> list[tuple]:
    """Markings visited by firing ``prefix`` from ``m0`` (raises on an illegal firing)."""
    marks = [tuple(m0)]
    for ev in _events(prefix):
        marks.append(fire_continuous(enc.net, marks[-1], ev.alpha, ev.transition))
    return marks


@dataclass(frozen=True)
class LimSequence:
    """Prefix of firings followed by rounds ``r = 1, 2, ...`` firing each kernel transition by ``2**-(r+1)``."""

    enc: EncodedNet
    start: tuple[Fraction, ...]
    prefix: tuple[FiringEvent, ...]
    kernel: tuple[int, ...]
    target: tuple[Fraction, ...]

    @staticmethod
    def amount(r: int) -> Fraction:
        return Fraction(1, 2 ** (r + 1))

    def after_prefix(self) -> tuple[Fraction, ...]:
        return replay_events(self.enc, self.start, self.prefix)[-1]

    def partial(self, rounds: int) -> tuple[Fraction, ...]:
        """Marking after the prefix and ``rounds`` complete rounds (closed form)."""
        m = list(self.after_prefix())
        done = HALF * (1 - Fraction(1, 2**rounds))
        C = self.enc.net.incidence
        for t in self.kernel:
            for p in range(len(m)):
                m[p] += done * C[p][t]
        return tuple(m)

    def limit(self) -> tuple[Fraction, ...]:
        m = list(self.after_prefix())
        C = self.enc.net.incidence
        for t in self.kernel:
            for p in range(len(m)):
                m[p] += HALF * C[p][t]
        return tuple(m)

    def validate(self, rounds: int = 20) -> None:
        """Replay prefix and ``rounds`` rounds exactly; check legality, geometry and the limit.

        Markings are scaled to integers by a common denominator, so every
        comparison is exact.
        """
        net = self.enc.net
        scale = lcm(*(q.denominator for q in self.start), *(e.alpha.denominator for e in self.prefix), 2 ** (rounds + 1))
        m = [int(q * scale) for q in self.start]

        def fire(t: int, amount: int, where: str):
            for p, w in net.pre[t].items():
                if amount * w > m[p]:
                    raise CertificateError(f"{where}: {net.transitions[t]} is not enabled enough")
            for p, w in net.pre[t].items():
                m[p] -= amount * w
            for p, w in net.post[t].items():
                m[p] += amount * w

        for k, ev in enumerate(self.prefix):
            if ev.alpha <= 0:
                raise CertificateError("prefix contains a null firing")
            fire(ev.transition, int(ev.alpha * scale), f"prefix event {k}")
        base = list(m)
        goal = [int(q * scale) for q in self.target]
        if tuple(Fraction(v, scale) for v in base) != self.after_prefix():
            raise CertificateError("integer replay disagrees with rational replay")
        if self.limit() != self.target:
            raise CertificateError("limit of the sequence is not the target marking")
        touched = {p for t in self.kernel for p in range(net.num_places) if net.incidence[p][t] != 0}
        for p in range(net.num_places):
            if p not in touched and base[p] != goal[p]:
                raise CertificateError(f"place {net.places[p]} is off target and never touched")
        for r in range(1, rounds + 1):
            amount = scale >> (r + 1)
            for t in self.kernel:
                fire(t, amount, f"round {r}")
            for p in touched:
                if (goal[p] - m[p]) * 2**r != goal[p] - base[p]:
                    raise CertificateError(f"round {r}: place {net.places[p]} is not at 2^-{r} of its gap")

    def to_dict(self) -> dict:
        tn = self.enc.net.transitions
        return {
            "prefix": [[format_fraction(e.alpha), tn[e.transition]] for e in self.prefix],
            "kernel": [tn[t] for t in self.kernel],
            "schedule": "geometric(1/2)",
            "start": {self.enc.net.places[p]: format_fraction(v) for p, v in enumerate(self.start) if v},
            "target": {self.enc.net.places[p]: format_fraction(v) for p, v in enumerate(self.target) if v},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _half_enabled(enc: EncodedNet, m: Sequence, candidates: Iterable[int]) -> int | None:
    for t in candidates:
        if enabling_degree(enc.net, m, t) >= HALF:
            return t
    return None


def construct_lim_sequence(f: BooleanNetwork | EncodedNet, w: ThreePhaseWitness) -> LimSequence:
    enc = f if isinstance(f, EncodedNet) else encode(f)
    try:
        w.validate(enc.bn)
    except ValueError as exc:
        raise ValueError(f"invalid witness: {exc}") from None

    names = enc.bn.names
    cur = tuple(w.x)
    prefix = []
    first: dict[int, int] = {}
    for i, value in w.phase1:
        m = marking_of(cur)
        t = _half_enabled(enc, m, enc.rising[i] if value == UP else enc.falling[i])
        if t is None:
            raise CertificateError(f"no transition of {names[i]} is half-enabled at {format_mp(cur)}")
        nxt = cur[:i] + (value,) + cur[i + 1:]
        if fire_continuous(enc.net, m, HALF, t) != marking_of(nxt):
            raise CertificateError(f"half-firing {enc.net.transitions[t]} does not reach {format_mp(nxt)}")
        prefix.append(FiringEvent(HALF, t))
        first[i] = t
        cur = nxt
    peak = cur
    m_peak = marking_of(peak)

    flipped = {}
    for i, value in w.phase2:
        t = _half_enabled(enc, m_peak, enc.rising[i] if value == UP else enc.falling[i])
        if t is None:
            raise CertificateError(f"no transition of {names[i]} is half-enabled at the peak")
        flipped[i] = t
    kernel = []
    for i, _ in w.phase1:
        t = flipped.get(i, first[i])
        if enabling_degree(enc.net, m_peak, t) != HALF:
            raise CertificateError(f"{enc.net.transitions[t]} is not exactly half-enabled at the peak")
        kernel.append(t)

    seq = LimSequence(enc, marking_of(w.x), tuple(prefix), tuple(kernel), marking_of(w.y))
    return seq


def _transient_value(t: int, enc: EncodedNet) -> int:
    return UP if enc.direction(t) > 0 else DOWN


def _refine(pattern: Sequence[int | None]) -> tuple[int, ...]:
    return tuple(UP if v is None else v for v in pattern)


def abstract_sequence(f: BooleanNetwork | EncodedNet, x: Sequence[int], prefix: Iterable) -> list[MPStep]:
    """MP path from ``x`` making each variable touched by ``prefix`` transient, in first-touch order."""
    steps, _ = _abstract(f, x, prefix)
    return steps


def _abstract(f, x, prefix):
    enc = f if isinstance(f, EncodedNet) else encode(f)
    x = tuple(int(b) for b in x)
    events = _events(prefix)
    marks = [marking_of(x)]
    for k, ev in enumerate(events):
        if ev.alpha <= 0:
            raise ValueError(f"event {k} is a null firing")
        try:
            marks.append(fire_continuous(enc.net, marks[-1], ev.alpha, ev.transition))
        except FiringError as exc:
            raise ValueError(f"event {k}: {exc}") from None

    cur = x
    steps: list[MPStep] = []
    for k, ev in enumerate(events):
        t = ev.transition
        j = enc.variable(t)
        if cur[j] >= 2:
            continue
        # first touch of j: the marking before it lies in mu(v) for any refinement v of its pattern
        v = _refine(decode_support(marks[k]))
        if enabling_degree(enc.net, marking_of(v), t) < HALF:
            raise CertificateError("enabledness did not transfer to the canonical marking")
        if enabling_degree(enc.net, marking_of(cur), t) < HALF:
            raise CertificateError("enabledness did not transfer to the current MP configuration")
        step = (j, _transient_value(t, enc))
        replay(enc.bn, cur, [step])
        steps.append(step)
        cur = cur[:j] + (step[1],) + cur[j + 1:]
    return steps, (enc, events, marks, cur)


def abstract_to_support(f: BooleanNetwork | EncodedNet, x: Sequence[int], prefix: Iterable) -> list[MPStep]:
    """Extend :func:`abstract_sequence` to an MP configuration matching the final marking's support.

    Touched variables that end Boolean are redirected towards their final
    value, using a transition of the sequence that moved mass that way, and
    then collapsed.
    """
    steps, (enc, events, marks, cur) = _abstract(f, x, prefix)
    final = decode_support(marks[-1])
    redirect = []
    collapse = []
    for i, value in enumerate(final):
        if value is None or cur[i] < 2:
            continue
        want = UP if value == 1 else DOWN
        if cur[i] != want:
            movers = [ev.transition for ev in events if enc.variable(ev.transition) == i and _transient_value(ev.transition, enc) == want]
            if not movers:
                raise CertificateError(f"variable {i} ends at {value} but never moved that way")
            if enabling_degree(enc.net, marking_of(cur), movers[-1]) < HALF:
                raise CertificateError("redirecting transition is not half-enabled")
            redirect.append((i, want))
        collapse.append((i, value))
    tail = redirect + collapse
    replay(enc.bn, cur, tail)
    return steps + tail


@dataclass(frozen=True)
class LimReachVerdict:
    """MP verdict for ``x -> y`` plus, when one can be built, a validated limit sequence.

    ``reachable`` is the MP answer. ``certificate`` is ``None`` for negative
    answers and for MP paths that need a variable to read its own opposite
    value while transient, which the encoded net cannot reproduce; ``reason``
    then says why.
    """

    reachable: bool
    witness: ThreePhaseWitness | None
    certificate: LimSequence | None
    reason: str = ""

    @property
    def certified(self) -> bool:
        return self.certificate is not None

    def __bool__(self) -> bool:
        return self.reachable


def certify(f: BooleanNetwork, x: Sequence[int], y: Sequence[int], rounds: int = 20) -> LimSequence | None:
    """Validated limit sequence from ``<x>`` to ``<y>`` built from a self-pinned witness, or ``None``."""
    w = three_phase_witness(f, x, y, self_pinned=True)
    if w is None:
        return None
    seq = construct_lim_sequence(f, w)
    seq.validate(rounds)
    return seq


def mp_limreach(f: BooleanNetwork, x: Sequence[int], y: Sequence[int], rounds: int = 20) -> LimReachVerdict:
    """MP reachability of ``y`` from ``x``, with a limit-sequence certificate for ``<y>`` from ``<x>``."""
    w = three_phase_witness(f, x, y)
    if w is None:
        return LimReachVerdict(False, None, None, "not MP-reachable")
    seq = certify(f, x, y, rounds)
    if seq is None:
        return LimReachVerdict(True, w, None, "every MP witness flips a variable by reading its own opposite value")
    return LimReachVerdict(True, w, seq)
