"""Randomized and exhaustive property suites.

Every suite is deterministic given its seed. A suite returns a
:class:`SuiteReport`; ``report.ok`` is false as soon as one check fails, and
``report.counterexample`` is the smallest recorded violation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .boolexpr import And, Const, Not, Or, Var
from .encoding import HALF, EncodedNet, decode_support, discrete_marking_of, encode, marking_of, mu_contains
from .examples import halving_net
from .limits import FiringEvent, abstract_sequence, abstract_to_support, construct_lim_sequence
from .mp import DOWN, UP, format_mp, mp_reach, mp_reach_boolean, mp_step_successors, replay, three_phase_witnesses
from .network import BooleanNetwork, code_config, format_config, reach_set, step_successors
from .petri import discrete_reach, enabling_degree, fire_continuous, fire_discrete, is_enabled_discrete
from .symbolic import state_equation_feasible

__all__ = [
    "SuiteReport",
    "SUITES",
    "random_network",
    "random_networks",
    "random_prefix",
    "has_self_loop",
    "run_suites",
    "suite_fa_dpn",
    "suite_mp_cpn",
    "suite_lemmas",
    "suite_phases",
    "suite_gap",
]

DEFAULT_SEED = 20240601


@dataclass
class SuiteReport:
    name: str
    instances: int = 0
    checks: int = 0
    violations: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def counterexample(self) -> dict | None:
        if not self.violations:
            return None
        return min(self.violations, key=lambda v: (v.get("n", 0), len(repr(v)), repr(v)))

    def fail(self, check: str, f: BooleanNetwork | None = None, **detail) -> None:
        v = {"check": check}
        if f is not None:
            v["n"] = f.n
            v["bn"] = f.to_text()
        v.update(detail)
        self.violations.append(v)

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "ok": self.ok,
            "instances": self.instances,
            "checks": self.checks,
            "violations": len(self.violations),
            "counterexample": self.counterexample,
            "notes": self.notes,
        }


# -- random instances ---------------------------------------------------------


def random_network(rng: random.Random, n: int, self_loops: bool = True) -> BooleanNetwork:
    """Each local function is a random truth table over a random subset of variables.

    ``self_loops=False`` keeps every variable out of its own local function.
    """
    fs = []
    for i in range(n):
        pool = list(range(n)) if self_loops else [j for j in range(n) if j != i]
        inputs = sorted(rng.sample(pool, rng.randint(0, len(pool))))
        rows = [rng.random() < 0.5 for _ in range(1 << len(inputs))]
        if not any(rows) or all(rows):
            fs.append(Const(rows[0]))
            continue
        terms = []
        for code, on in enumerate(rows):
            if on:
                lits = [Var(j) if code >> k & 1 else Not(Var(j)) for k, j in enumerate(inputs)]
                terms.append(lits[0] if len(lits) == 1 else And(tuple(lits)))
        fs.append(terms[0] if len(terms) == 1 else Or(tuple(terms)))
    return BooleanNetwork(tuple(f"x{i + 1}" for i in range(n)), tuple(fs))


def random_networks(seed: int, count: int, sizes: Sequence[int], self_loops: bool = True) -> list[BooleanNetwork]:
    rng = random.Random(seed)
    return [random_network(rng, rng.choice(list(sizes)), self_loops) for _ in range(count)]


def has_self_loop(f: BooleanNetwork) -> bool:
    return any(i in f.inputs(i) for i in range(f.n))


def _random_interior(rng: random.Random) -> Fraction:
    d = rng.randint(2, 12)
    return Fraction(rng.randint(1, d - 1), d)


def random_mp(rng: random.Random, n: int) -> tuple[int, ...]:
    return tuple(rng.randrange(4) for _ in range(n))


def random_boolean(rng: random.Random, n: int) -> tuple[int, ...]:
    return tuple(rng.randrange(2) for _ in range(n))


def random_member(rng: random.Random, x: Sequence[int]) -> tuple[Fraction, ...]:
    """A random marking of ``mu(x)``."""
    n = len(x)
    m = [Fraction(0)] * (2 * n)
    for i, v in enumerate(x):
        if v >= 2:
            lo = _random_interior(rng)
        else:
            lo = Fraction(1 - v)
        m[i], m[i + n] = lo, 1 - lo
    return tuple(m)


def random_prefix(rng: random.Random, enc: EncodedNet, m0: Sequence, length: int) -> list[FiringEvent]:
    """A valid firing sequence of at most ``length`` non-null events (shorter if a deadlock is hit)."""
    m = tuple(m0)
    out = []
    for _ in range(length):
        live = [(t, e) for t in range(enc.net.num_transitions) if (e := enabling_degree(enc.net, m, t)) > 0]
        if not live:
            break
        t, enab = rng.choice(live)
        alpha = enab if rng.random() < 0.3 else enab * _random_interior(rng)
        out.append(FiringEvent(alpha, t))
        m = fire_continuous(enc.net, m, alpha, t)
    return out


# -- suites -------------------------------------------------------------------


def suite_fa_dpn(networks: Iterable[BooleanNetwork]) -> SuiteReport:
    """Single firings of the discrete encoding coincide with fully asynchronous steps."""
    rep = SuiteReport("fa-dpn")
    for f in networks:
        rep.instances += 1
        enc = encode(f)
        n = f.n
        for c in range(1 << n):
            x = code_config(c, n)
            M = discrete_marking_of(x)
            fired = set()
            for t in range(enc.net.num_transitions):
                if is_enabled_discrete(enc.net, M, t):
                    M2 = fire_discrete(enc.net, M, t)
                    pattern = decode_support(M2)
                    if None in pattern:
                        rep.fail("discrete firing leaves a Boolean marking", f, x=format_config(x), t=enc.net.transitions[t])
                        continue
                    fired.add(pattern)
            expected = set(step_successors(f, "fa", x))
            rep.checks += 1
            if fired != expected:
                rep.fail(
                    "one-transition firings equal fa successors",
                    f,
                    x=format_config(x),
                    dpn=sorted(format_config(y) for y in fired),
                    fa=sorted(format_config(y) for y in expected),
                )
            dr = discrete_reach(enc.net, M)
            got = sorted(decode_support(M2) for M2 in dr.markings)
            rep.checks += 1
            if got != reach_set(f, "fa", x) or not dr.safe:
                rep.fail(
                    "DPN reach set equals fa reach set",
                    f,
                    x=format_config(x),
                    dpn=[format_config(y) for y in got],
                    fa=[format_config(y) for y in reach_set(f, "fa", x)],
                )
        if rep.instances == 1:
            x0 = (0,) * n
            dr = discrete_reach(enc.net, discrete_marking_of(x0))
            members = ",".join(format_config(decode_support(M2)) for M2 in sorted(dr.markings, key=decode_support))
            dead = ",".join(format_config(decode_support(M2)) for M2 in sorted(dr.deadlocks, key=decode_support))
            rep.notes.append(f"DPN reach set from <{format_config(x0)}> = {{{members}}}, deadlocks {{{dead}}}")
    return rep


def suite_mp_cpn(networks: Iterable[BooleanNetwork], *, seed: int = DEFAULT_SEED, prefixes: int = 50, rounds: int = 20,
                 max_length: int = 12) -> SuiteReport:
    """MP reachability against certified limit sequences, in both directions."""
    rep = SuiteReport("mp-cpn")
    rng = random.Random(seed)
    for f in networks:
        rep.instances += 1
        enc = encode(f)
        n = f.n
        for c in range(1 << n):
            x = code_config(c, n)
            reach = mp_reach_boolean(f, x)
            pinned = three_phase_witnesses(f, x, self_pinned=True)
            for y in reach:
                rep.checks += 1
                if y not in pinned:
                    rep.fail(
                        "MP-reachable target has a limit sequence",
                        f,
                        x=format_config(x),
                        y=format_config(y),
                        error="every MP witness flips a variable by reading its own opposite value",
                    )
                    continue
                try:
                    construct_lim_sequence(enc, pinned[y]).validate(rounds)
                except (AssertionError, ValueError) as exc:
                    rep.fail("replay-valid limit sequence", f, x=format_config(x), y=format_config(y), error=str(exc))
        reach_cache: dict[tuple, set] = {}
        for _ in range(prefixes):
            x = random_boolean(rng, n)
            prefix = random_prefix(rng, enc, marking_of(x), rng.randint(1, max_length))
            rep.checks += 1
            try:
                path = abstract_sequence(enc, x, prefix)
                end = replay(f, x, path)[-1]
                touched = {enc.variable(ev.transition) for ev in prefix}
                if {i for i, v in enumerate(end) if v >= 2} != touched:
                    raise AssertionError("transient variables differ from touched variables")
                full = abstract_to_support(enc, x, prefix)
                end = replay(f, x, full)[-1]
                final = decode_support(fire_all(enc, x, prefix))
                if any((v >= 2) != (p is None) or (p is not None and v != p) for v, p in zip(end, final)):
                    raise AssertionError("abstraction endpoint does not match the final support")
                if x not in reach_cache:
                    reach_cache[x] = set(mp_reach(f, x))
                if end not in reach_cache[x]:
                    raise AssertionError(f"endpoint {format_mp(end)} is not MP-reachable")
            except (AssertionError, ValueError) as exc:
                rep.fail(
                    "abstraction replays legally",
                    f,
                    x=format_config(x),
                    prefix=[[str(e.alpha), enc.net.transitions[e.transition]] for e in prefix],
                    error=str(exc),
                )
    return rep


def fire_all(enc: EncodedNet, x: Sequence[int], prefix: Iterable[FiringEvent]):
    m = marking_of(x)
    for ev in prefix:
        m = fire_continuous(enc.net, m, ev.alpha, ev.transition)
    return m


def _biased_mp(rng: random.Random, enc: EncodedNet, t: int) -> list[int]:
    """Random MP configuration, each read literal of ``t`` satisfied (possibly transiently) with probability 1/2."""
    x = list(random_mp(rng, enc.n))
    for j, positive in enc.clauses[t].literals:
        if rng.random() < 0.5:
            x[j] = rng.choice((int(positive), UP, DOWN))
    return x


def _lemma1(rng, f, enc, rep):
    x = random_mp(rng, f.n)
    if not enc.net.num_transitions:
        return
    t = rng.randrange(enc.net.num_transitions)
    m, m2 = random_member(rng, x), random_member(rng, x)
    if not (mu_contains(x, m) and mu_contains(x, m2)):
        rep.fail("sampled markings belong to mu", f, x=format_mp(x))
        return
    a, b = enabling_degree(enc.net, m, t), enabling_degree(enc.net, m2, t)
    if (a > 0) != (b > 0):
        rep.fail("enabledness constant on mu", f, x=format_mp(x), t=enc.net.transitions[t])
    if a > 0 and enabling_degree(enc.net, marking_of(x), t) < HALF:
        rep.fail("canonical marking half-enables", f, x=format_mp(x), t=enc.net.transitions[t])


def _lemma2(rng, f, enc, rep):
    if not enc.net.num_transitions:
        return
    t = rng.randrange(enc.net.num_transitions)
    i, up = enc.variable(t), enc.direction(t) > 0
    x = _biased_mp(rng, enc, t)
    x[i] = rng.choice((0, DOWN) if up else (1, UP))
    x = tuple(x)
    m = random_member(rng, x)
    if enabling_degree(enc.net, m, t) > 0:
        y = x[:i] + ((UP if up else DOWN),) + x[i + 1:]
        if y not in mp_step_successors(f, x):
            rep.fail("enabled transition gives a legal transient step", f, x=format_mp(x), t=enc.net.transitions[t])


def _lemma3(rng, f, enc, rep):
    if not enc.net.num_transitions:
        return
    t = rng.randrange(enc.net.num_transitions)
    y = _biased_mp(rng, enc, t)
    x = [v if rng.random() < 0.5 else rng.choice((UP, DOWN)) for v in y]
    # Boolean coordinates of x agree with y by construction
    if enabling_degree(enc.net, marking_of(y), t) >= HALF and enabling_degree(enc.net, marking_of(x), t) < HALF:
        rep.fail("Boolean-pinned agreement keeps half-enabledness", f, x=format_mp(x), y=format_mp(y), t=enc.net.transitions[t])


def _successor(rng, f, x, keep: Callable[[tuple, tuple, int], bool]):
    options = []
    for y in mp_step_successors(f, x):
        i = next(k for k in range(f.n) if x[k] != y[k])
        if keep(x, y, i):
            options.append((y, i))
    return rng.choice(options) if options else None


def _lemma4(rng, f, enc, rep):
    x = random_mp(rng, f.n)
    pick = _successor(rng, f, x, lambda a, b, i: b[i] >= 2)
    if pick is None:
        return
    y, i = pick
    side = enc.rising[i] if y[i] == UP else enc.falling[i]
    if not any(enabling_degree(enc.net, marking_of(x), t) >= HALF for t in side):
        rep.fail("transient step has a half-enabled transition", f, x=format_mp(x), y=format_mp(y))


def _corollary1(rng, f, enc, rep):
    x = random_mp(rng, f.n)
    pick = _successor(rng, f, x, lambda a, b, i: a[i] < 2)
    if pick is None:
        return
    y, i = pick
    mx, my = marking_of(x), marking_of(y)
    if not any(
        enabling_degree(enc.net, mx, t) >= HALF and fire_continuous(enc.net, mx, HALF, t) == my
        for t in enc.acting_on(i)
    ):
        rep.fail("Boolean-to-transient step is one half-firing", f, x=format_mp(x), y=format_mp(y))


LEMMAS = {
    "lemma1": _lemma1,
    "lemma2": _lemma2,
    "lemma3": _lemma3,
    "lemma4": _lemma4,
    "corollary1": _corollary1,
}


def suite_lemmas(networks: Sequence[BooleanNetwork], *, seed: int = DEFAULT_SEED, instances: int = 10_000) -> list[SuiteReport]:
    """``instances`` random instances per lemma, spread over ``networks``."""
    out = []
    for k, (name, check) in enumerate(LEMMAS.items()):
        rep = SuiteReport(name)
        rng = random.Random(seed * 31 + k)
        for _ in range(instances):
            f = rng.choice(networks)
            before = len(rep.violations)
            check(rng, f, encode(f), rep)
            rep.instances += 1
            rep.checks += 1
            if len(rep.violations) > before + 1:
                del rep.violations[before + 1:]
        out.append(rep)
    return out


def suite_phases(networks: Iterable[BooleanNetwork]) -> SuiteReport:
    """A three-phase witness exists exactly for the MP-reachable Boolean targets, and every witness replays."""
    rep = SuiteReport("phases")
    for f in networks:
        rep.instances += 1
        for c in range(1 << f.n):
            x = code_config(c, f.n)
            ws = three_phase_witnesses(f, x)
            reach = set(mp_reach_boolean(f, x))
            for d in range(1 << f.n):
                y = code_config(d, f.n)
                rep.checks += 1
                if (y in ws) != (y in reach):
                    rep.fail("witness exists iff MP-reachable", f, x=format_config(x), y=format_config(y))
                elif y in ws:
                    try:
                        ws[y].validate(f)
                    except ValueError as exc:
                        rep.fail("witness replays", f, x=format_config(x), y=format_config(y), error=str(exc))
    return rep


def suite_gap(*, seed: int = DEFAULT_SEED, sequences: int = 1000, max_length: int = 50, loops: int = 50) -> SuiteReport:
    """Finite firing never empties the marked trap of the halving net; the halving loop does in the limit."""
    rep = SuiteReport("gap")
    net, m0 = halving_net()
    rng = random.Random(seed)
    for _ in range(sequences):
        rep.instances += 1
        m = m0
        for _ in range(rng.randint(1, max_length)):
            live = [(t, e) for t in range(net.num_transitions) if (e := enabling_degree(net, m, t)) > 0]
            t, enab = rng.choice(live)
            alpha = enab if rng.random() < 0.3 else enab * _random_interior(rng)
            m = fire_continuous(net, m, alpha, t)
            rep.checks += 1
            if sum(m) <= 0:
                rep.fail("finite firing keeps the trap marked", marking=[str(v) for v in m])
    m = m0
    for k in range(1, loops + 1):
        m = fire_continuous(net, m, m[0], 0)
        m = fire_continuous(net, m, m[1] / 2, 1)
        rep.checks += 1
        if sum(m) != Fraction(1, 2**k):
            rep.fail("halving loop mass", k=k, marking=[str(v) for v in m])
    rep.checks += 1
    if not state_equation_feasible(net, m0, (0, 0), range(net.num_transitions)):
        rep.fail("empty marking satisfies the state equation")
    rep.notes.append(f"mass after {loops} halving loops = 1/2^{loops}; empty marking state-equation feasible")
    return rep


SUITES = ("fa-dpn", "mp-cpn", "lemmas", "phases", "gap")


def run_suites(name: str, f: BooleanNetwork | None = None, *, seed: int = DEFAULT_SEED,
               instances: int | None = None, self_loops: bool = True) -> list[SuiteReport]:
    """Run suite ``name`` (or ``"all"``) on ``f`` or, without ``f``, on seeded random networks.

    ``instances`` counts random networks, except for the lemma suites where
    it counts sampled instances per lemma.
    """
    if name == "all":
        return [rep for s in SUITES for rep in run_suites(s, f, seed=seed, instances=instances, self_loops=self_loops)]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}, all")

    def pool(default: int, sizes: Sequence[int]) -> list[BooleanNetwork]:
        if f is not None:
            return [f]
        return random_networks(seed, instances or default, sizes, self_loops)

    if name == "fa-dpn":
        return [suite_fa_dpn(pool(100, (1, 2, 3, 4)))]
    if name == "mp-cpn":
        return [suite_mp_cpn(pool(200, (2, 3, 4)), seed=seed)]
    if name == "phases":
        return [suite_phases(pool(50, (1, 2, 3)))]
    if name == "gap":
        return [suite_gap(seed=seed)]
    nets = [f] if f is not None else random_networks(seed, 64, (1, 2, 3, 4, 5), self_loops)
    return suite_lemmas(nets, seed=seed, instances=instances or 10_000)
