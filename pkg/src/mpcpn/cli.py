"""Command-line interface: ``mpcpn <command> [input] [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from .boolexpr import BNNameError, BNSyntaxError
from .encoding import EncodedNet, decode_support, encode, encoded_to_json, marking_of, size_estimate
from .limits import FiringEvent, mp_limreach
from .mp import format_mp, mp_reach, mp_reach_boolean, parse_mp
from .network import BooleanNetwork, fixed_points, format_config, parse_bn, parse_config, reach_set
from .petri import FiringError, Net, fire_continuous, format_fraction, net_from_dict, net_to_dot, parse_fraction
from .symbolic import NodeCapExceeded, build_arg, build_srt
from .verify import DEFAULT_SEED, SUITES, run_suites

EPILOG = r"""
Boolean network text (one declaration per line, '#' starts a comment):

    decl  ::= ident "," expr
    expr  ::= ident | "0" | "1" | "!" expr | expr "&" expr | expr "|" expr | "(" expr ")"
    ident ::= [A-Za-z_][A-Za-z0-9_]*
    precedence: ! binds tighter than &, which binds tighter than |

Configurations are strings in declaration order: 0/1 for Boolean values,
'+' for increasing and '-' for decreasing transient values (e.g. 011, +0-).

Net JSON (input of simulate/arg/srt, output of encode --format json):

    {"places": [name, ...],
     "transitions": [{"name": str, "pre": {place: weight}, "post": {place: weight}}, ...],
     "marking": {place: "num/den"},                      (optional)
     "encoding": {"n": int, "variables": [...],           (encode only)
                  "place_of": {var: [place0, place1]},
                  "target_of_transition": {t: {"var": var, "dir": "+"|"-"}}}}

Firing events (simulate --events): a JSON list [["1/2", "t_x1+:[!x2]"], ...]
or text lines "<alpha> <transition>"; transitions may be names or indices.

Limit sequence JSON (limreach):

    {"prefix": [[alpha, t], ...], "kernel": [t, ...], "schedule": "geometric(1/2)",
     "start": {place: mass}, "target": {place: mass}}

Round r = 1, 2, ... fires every kernel transition by 2^-(r+1).

Exit status: 0 success, 1 verification failure, 2 input error.
"""


class InputError(ValueError):
    pass


def _read_source(args) -> str | None:
    if args.expr is not None:
        return args.expr.replace("\\n", "\n")
    if args.input is None:
        return None
    if args.input == "-":
        return sys.stdin.read()
    try:
        with open(args.input, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc.strerror}") from None


def _load(args, need: str = "bn"):
    """Return ``(bn, net, marking)``; ``need`` is ``"bn"``, ``"net"`` or ``"any"``."""
    text = _read_source(args)
    if text is None:
        raise InputError("no input: give a file path, '-' for stdin, or -e TEXT")
    if text.lstrip().startswith("{"):
        if need == "bn":
            raise InputError("this command needs a Boolean network, not a net document")
        try:
            net, marking = net_from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return None, net, marking
    return parse_bn(text), None, None


def _config(text: str, f: BooleanNetwork):
    return parse_config(text, f.n)


def _start_marking(args, f: BooleanNetwork | None, net: Net, marking):
    if getattr(args, "marking", None):
        return _parse_marking(args.marking, f, net)
    if getattr(args, "start", None) and f is not None:
        return marking_of(parse_mp(args.start, f.n))
    if marking is not None:
        return marking
    if f is not None:
        return marking_of((0,) * f.n)
    raise InputError("no marking: the net document has none and --marking was not given")


def _parse_marking(text: str, f: BooleanNetwork | None, net: Net):
    text = text.strip()
    if text.startswith("{"):
        try:
            return net.marking({k: parse_fraction(v) for k, v in json.loads(text).items()})
        except (json.JSONDecodeError, AttributeError) as exc:
            raise InputError(f"invalid marking JSON: {exc}") from None
    if f is not None:
        return marking_of(parse_mp(text, f.n))
    raise InputError("a net document needs a JSON marking such as '{\"p1\": \"1\"}'")


def _parse_events(text: str, net: Net) -> list[FiringEvent]:
    def transition(tok) -> int:
        if isinstance(tok, int) or (isinstance(tok, str) and tok.isdigit()):
            t = int(tok)
            if not 0 <= t < net.num_transitions:
                raise InputError(f"transition index {t} out of range")
            return t
        if tok not in net.transitions:
            raise InputError(f"unknown transition {tok!r}")
        return net.transitions.index(tok)

    text = text.strip()
    if text.startswith("["):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid events JSON: {exc.msg}") from None
    else:
        raw = [line.split(None, 1) for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    out = []
    for k, ev in enumerate(raw):
        if len(ev) != 2:
            raise InputError(f"event {k} must be a pair (alpha, transition)")
        out.append(FiringEvent(parse_fraction(ev[0]), transition(ev[1].strip() if isinstance(ev[1], str) else ev[1])))
    return out


def _emit(doc, fmt: str, text: str | None = None) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write(text if text is not None else json.dumps(doc, indent=2) + "\n")


def _marking_doc(net: Net, m) -> dict:
    return {net.places[p]: format_fraction(v) for p, v in enumerate(m) if v != 0}


# -- commands -----------------------------------------------------------------


def cmd_parse(args) -> int:
    f, _, _ = _load(args)
    text = f.to_text()
    doc = {"variables": list(f.names), "functions": dict(line.split(", ", 1) for line in text.splitlines())}
    _emit(doc, args.format, text)
    return 0


def cmd_reach(args) -> int:
    f, _, _ = _load(args)
    if args.semantics == "mp":
        if args.transient:
            states = [format_mp(x) for x in mp_reach(f, parse_mp(args.start, f.n))]
        else:
            states = [format_config(x) for x in mp_reach_boolean(f, _config(args.start, f))]
    else:
        states = [format_config(x) for x in reach_set(f, args.semantics, _config(args.start, f))]
    _emit({"semantics": args.semantics, "from": args.start, "reachable": states}, args.format, "".join(s + "\n" for s in states))
    return 0


def cmd_fixpoints(args) -> int:
    f, _, _ = _load(args)
    fps = [format_config(x) for x in fixed_points(f)]
    _emit({"fixed_points": fps}, args.format, "".join(s + "\n" for s in fps))
    return 0


def cmd_encode(args) -> int:
    f, _, _ = _load(args)
    est = size_estimate(f)
    if est > args.cap:
        raise InputError(f"encoding would need up to {est} transitions (cap {args.cap}); raise --cap to proceed")
    enc = encode(f, args.dnf)
    m = marking_of(parse_mp(args.start, f.n)) if args.start else None
    if args.format == "dot":
        sys.stdout.write(net_to_dot(enc.net, m, name="encoding"))
    else:
        sys.stdout.write(encoded_to_json(enc, m) + "\n")
    return 0


def _net_of(args):
    f, net, marking = _load(args, need="any")
    enc: EncodedNet | None = None
    if f is not None:
        enc = encode(f)
        net = enc.net
    return f, enc, net, marking


def cmd_simulate(args) -> int:
    f, enc, net, marking = _net_of(args)
    m0 = _start_marking(args, f, net, marking)
    try:
        with open(args.events, encoding="utf-8") as fh:
            events = _parse_events(fh.read(), net)
    except OSError as exc:
        raise InputError(f"cannot read {args.events}: {exc.strerror}") from None
    marks = replay_events_net(net, m0, events)
    doc = {
        "events": [[format_fraction(e.alpha), net.transitions[e.transition]] for e in events],
        "markings": [_marking_doc(net, m) for m in marks],
        "final": _marking_doc(net, marks[-1]),
    }
    if enc is not None or _looks_encoded(net):
        try:
            doc["decoded"] = "".join("*" if v is None else str(v) for v in decode_support(marks[-1]))
        except ValueError:
            pass
    lines = []
    for k, m in enumerate(marks):
        head = "start" if k == 0 else f"{format_fraction(events[k - 1].alpha)} {net.transitions[events[k - 1].transition]}"
        lines.append(f"{head}: " + " ".join(f"{p}={v}" for p, v in _marking_doc(net, m).items()))
    if "decoded" in doc:
        lines.append(f"decoded: {doc['decoded']}")
    _emit(doc, args.format, "\n".join(lines) + "\n")
    return 0


def _looks_encoded(net: Net) -> bool:
    n = net.num_places // 2
    return net.num_places % 2 == 0 and all(
        net.places[i].endswith("=0") and net.places[i + n] == net.places[i][:-2] + "=1" for i in range(n)
    )


def replay_events_net(net: Net, m0, events: Sequence[FiringEvent]):
    marks = [tuple(Fraction(v) for v in m0)]
    for k, ev in enumerate(events):
        try:
            marks.append(fire_continuous(net, marks[-1], ev.alpha, ev.transition))
        except FiringError as exc:
            raise InputError(f"event {k}: {exc}") from None
    return marks


def _arg_text(arg) -> str:
    lines = []
    for k, S in enumerate(arg.nodes):
        lines.append(f"n{k} {{{','.join(arg.names(S))}}}")
    for e in arg.edges:
        lines.append(f"n{e.source} -> n{e.target} {e.kind}")
    return "\n".join(lines) + "\n"


def cmd_arg(args) -> int:
    f, _, net, marking = _net_of(args)
    m0 = _start_marking(args, f, net, marking)
    arg = build_arg(net, m0, cap=args.cap)
    if args.format == "dot":
        sys.stdout.write(arg.to_dot())
    else:
        _emit(arg.to_dict(), args.format, _arg_text(arg))
    return 0


def cmd_srt(args) -> int:
    f, _, net, marking = _net_of(args)
    m0 = _start_marking(args, f, net, marking)
    tree = build_srt(net, m0, build_arg(net, m0, cap=args.cap), cap=args.cap)
    if args.format == "dot":
        sys.stdout.write(tree.to_dot())
        return 0
    lines = []

    def show(node, indent):
        mode = ",".join(net.transitions[t] for t in sorted(node.mode))
        lines.append(f"{'  ' * indent}{{{mode}}} ({len(node.members)} supports)")
        for _, child in node.children:
            show(child, indent + 1)

    show(tree.root, 0)
    _emit(tree.to_dict(), args.format, "\n".join(lines) + "\n")
    return 0


def cmd_limreach(args) -> int:
    f, _, _ = _load(args)
    x, y = _config(args.start, f), _config(args.target, f)
    v = mp_limreach(f, x, y, rounds=args.rounds)
    doc = {"from": args.start, "to": args.target, "mp_reachable": v.reachable, "certified": v.certified}
    if v.reason:
        doc["reason"] = v.reason
    if v.certificate is not None:
        doc["certificate"] = v.certificate.to_dict()
    text = f"{'reachable' if v.reachable else 'unreachable'}"
    if v.certificate is not None:
        text += "\n" + v.certificate.to_json()
    elif v.reachable:
        text += f" (uncertified: {v.reason})"
    _emit(doc, args.format, text + "\n")
    return 0 if v.reachable == v.certified else 1


def cmd_verify(args) -> int:
    f = None
    if args.input is not None or args.expr is not None:
        f, _, _ = _load(args)
    reports = run_suites(args.suite, f, seed=args.seed, instances=args.instances, self_loops=not args.no_self_loops)
    docs = [r.to_dict() for r in reports]
    if args.format == "json":
        _emit({"seed": args.seed, "reports": docs}, "json")
    else:
        for r in reports:
            status = "pass" if r.ok else "FAIL"
            sys.stdout.write(f"{status} {r.name}: {r.instances} instances, {r.checks} checks, {len(r.violations)} violations\n")
            for note in r.notes:
                sys.stdout.write(f"  {note}\n")
            if not r.ok:
                sys.stdout.write("  counterexample: " + json.dumps(r.counterexample, sort_keys=True) + "\n")
    return 0 if all(r.ok for r in reports) else 1


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", nargs="?", help="BN text or net JSON file ('-' for stdin)")
    common.add_argument("-e", "--expr", help="inline input text; '\\n' separates lines")
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")
    common.add_argument("--error-json", action="store_true", help="report input errors as JSON on stdout")
    common.add_argument("--cap", type=_positive, default=10_000, help="node/state limit (default 10000)")

    p = argparse.ArgumentParser(
        prog="mpcpn",
        description="Boolean networks under most permissive semantics and their continuous Petri net encodings.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_, epilog=EPILOG,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.set_defaults(func=func)
        return sp

    add("parse", cmd_parse, "validate a BN and print it normalised")
    sp = add("reach", cmd_reach, "configurations reachable under a semantics")
    sp.add_argument("--semantics", choices=("fa", "syn", "ga", "mp"), required=True)
    sp.add_argument("--from", dest="start", required=True, metavar="CONFIG")
    sp.add_argument("--transient", action="store_true", help="with mp: list all MP configurations, not only Boolean ones")
    add("fixpoints", cmd_fixpoints, "fixed points of the BN")
    sp = add("encode", cmd_encode, "Petri net encoding of the BN")
    sp.add_argument("--from", dest="start", metavar="CONFIG", help="include the marking of this (MP) configuration")
    sp.add_argument("--dnf", choices=("prime", "minterm"), default="prime")
    sp = add("simulate", cmd_simulate, "replay a continuous firing sequence")
    sp.add_argument("--marking", help="MP configuration (BN input) or JSON marking")
    sp.add_argument("--events", required=True, metavar="FILE")
    for name, func, help_ in (("arg", cmd_arg, "abstract reachability graph over supports"),
                              ("srt", cmd_srt, "symbolic reachability tree of modes")):
        sp = add(name, func, help_)
        sp.add_argument("--from", dest="start", metavar="CONFIG", help="start configuration (BN input)")
        sp.add_argument("--marking", help="JSON marking (net input)")
    sp = add("limreach", cmd_limreach, "lim-reachability between Boolean configurations, with certificate")
    sp.add_argument("--from", dest="start", required=True, metavar="CONFIG")
    sp.add_argument("--to", dest="target", required=True, metavar="CONFIG")
    sp.add_argument("--rounds", type=_positive, default=20, help="rounds replayed when validating (default 20)")
    sp = add("verify", cmd_verify, "run the property suites (random BNs unless an input is given)")
    sp.add_argument("--suite", choices=SUITES + ("all",), default="all")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--instances", type=_positive, help="random networks (lemma suites: instances per lemma)")
    sp.add_argument("--no-self-loops", action="store_true", help="random local functions never read their own variable")
    return p


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _error(args, exc: Exception) -> int:
    kind = type(exc).__name__
    doc = {"error": kind, "message": str(exc)}
    for attr in ("line", "column"):
        if hasattr(exc, attr):
            doc[attr] = getattr(exc, attr)
    if getattr(args, "error_json", False):
        sys.stdout.write(json.dumps(doc) + "\n")
    else:
        sys.stderr.write(f"mpcpn: error: {exc}\n")
    return 2


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format == "dot" and args.command not in ("encode", "arg", "srt"):
        parser.error(f"--format dot is not available for {args.command}")
    try:
        return args.func(args)
    except (InputError, BNSyntaxError, BNNameError, FiringError, NodeCapExceeded, ValueError) as exc:
        return _error(args, exc)


if __name__ == "__main__":
    sys.exit(main())
