"""Boolean expression trees and the line-oriented network text format.

Grammar (one declaration per line, ``#`` starts a comment)::

    line  ::= ident "," expr
    expr  ::= ident | "0" | "1" | "!" expr | expr "&" expr | expr "|" expr | "(" expr ")"

Precedence is ``!`` > ``&`` > ``|``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "BoolExpr",
    "Const",
    "Var",
    "Not",
    "And",
    "Or",
    "BNSyntaxError",
    "BNNameError",
    "parse_declarations",
    "evaluate",
    "evaluate_table",
    "variables",
    "to_text",
]


class BoolExpr:
    """Base class of expression nodes (immutable)."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(BoolExpr):
    value: bool


@dataclass(frozen=True)
class Var(BoolExpr):
    index: int


@dataclass(frozen=True)
class Not(BoolExpr):
    arg: BoolExpr


@dataclass(frozen=True)
class And(BoolExpr):
    args: tuple[BoolExpr, ...]


@dataclass(frozen=True)
class Or(BoolExpr):
    args: tuple[BoolExpr, ...]


class BNSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class BNNameError(ValueError):
    """Undeclared or duplicate identifier."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def evaluate(expr: BoolExpr, x: Sequence[int]) -> bool:
    if isinstance(expr, Var):
        return bool(x[expr.index])
    if isinstance(expr, Not):
        return not evaluate(expr.arg, x)
    if isinstance(expr, And):
        return all(evaluate(a, x) for a in expr.args)
    if isinstance(expr, Or):
        return any(evaluate(a, x) for a in expr.args)
    if isinstance(expr, Const):
        return expr.value
    raise TypeError(f"not an expression: {expr!r}")


def evaluate_table(expr: BoolExpr, n: int) -> np.ndarray:
    """Truth table over all 2**n configurations; entry ``k`` has ``x_i = (k >> i) & 1``."""
    codes = np.arange(1 << n, dtype=np.int64)

    def rec(e: BoolExpr) -> np.ndarray:
        if isinstance(e, Var):
            return ((codes >> e.index) & 1).astype(bool)
        if isinstance(e, Not):
            return ~rec(e.arg)
        if isinstance(e, And):
            out = np.ones(codes.shape, dtype=bool)
            for a in e.args:
                out &= rec(a)
            return out
        if isinstance(e, Or):
            out = np.zeros(codes.shape, dtype=bool)
            for a in e.args:
                out |= rec(a)
            return out
        if isinstance(e, Const):
            return np.full(codes.shape, e.value, dtype=bool)
        raise TypeError(f"not an expression: {e!r}")

    return rec(expr).astype(np.uint8)


def variables(expr: BoolExpr) -> frozenset[int]:
    """Indices of the variables syntactically referenced by ``expr``."""
    if isinstance(expr, Var):
        return frozenset((expr.index,))
    if isinstance(expr, Not):
        return variables(expr.arg)
    if isinstance(expr, (And, Or)):
        out: frozenset[int] = frozenset()
        for a in expr.args:
            out |= variables(a)
        return out
    return frozenset()


_PREC = {Or: 1, And: 2, Not: 3}


def to_text(expr: BoolExpr, names: Sequence[str]) -> str:
    """Render with minimal parentheses in the input grammar."""

    def rec(e: BoolExpr, parent: int) -> str:
        if isinstance(e, Var):
            return names[e.index]
        if isinstance(e, Const):
            return "1" if e.value else "0"
        if isinstance(e, Not):
            return "!" + rec(e.arg, 3)
        prec = _PREC[type(e)]
        sep = " & " if isinstance(e, And) else " | "
        s = sep.join(rec(a, prec) for a in e.args)
        return f"({s})" if prec < parent else s

    return rec(expr, 0)


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([01])|([!&|()]))")


class _Parser:
    def __init__(self, text: str, lineno: int, offset: int, lookup):
        self.text = text
        self.lineno = lineno
        self.offset = offset
        self.lookup = lookup
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
                raise BNSyntaxError(f"unexpected character {text[col - 1]!r}", lineno, offset + col)
            kind = "ident" if m.group(1) else "const" if m.group(2) else "op"
            value = m.group(m.lastindex)
            self.tokens.append((kind, value, offset + m.start(m.lastindex) + 1))
            pos = m.end()
        self.tokens.append(("end", "", offset + len(text) + 1))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message, tok):
        raise BNSyntaxError(message, self.lineno, tok[2])

    def parse(self) -> BoolExpr:
        e = self.disjunction()
        tok = self.peek()
        if tok[0] != "end":
            self.error(f"unexpected token {tok[1]!r}", tok)
        return e

    def disjunction(self) -> BoolExpr:
        args = [self.conjunction()]
        while self.peek()[:2] == ("op", "|"):
            self.take()
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self) -> BoolExpr:
        args = [self.unary()]
        while self.peek()[:2] == ("op", "&"):
            self.take()
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self) -> BoolExpr:
        tok = self.take()
        kind, value, col = tok
        if kind == "op" and value == "!":
            return Not(self.unary())
        if kind == "op" and value == "(":
            e = self.disjunction()
            close = self.take()
            if close[:2] != ("op", ")"):
                self.error("expected ')'", close)
            return e
        if kind == "const":
            return Const(value == "1")
        if kind == "ident":
            return Var(self.lookup(value, self.lineno, col))
        if kind == "end":
            self.error("unexpected end of expression", tok)
        self.error(f"unexpected token {value!r}", tok)


_DECL = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*,")


def parse_declarations(text: str) -> tuple[tuple[str, ...], tuple[BoolExpr, ...]]:
    """Parse network source into declaration-ordered names and local functions."""
    rows = []
    names: list[str] = []
    where: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _DECL.match(line)
        if m is None:
            col = len(line) - len(line.lstrip()) + 1
            raise BNSyntaxError("expected '<identifier>, <expression>'", lineno, col)
        name = m.group(1)
        if name in where:
            raise BNNameError(
                f"duplicate declaration of {name!r} (first declared on line {where[name]})",
                lineno,
                m.start(1) + 1,
            )
        where[name] = lineno
        names.append(name)
        rows.append((lineno, line[m.end():], m.end()))

    if not names:
        raise BNSyntaxError("no variable declarations", 1, 1)
    index = {name: i for i, name in enumerate(names)}

    def lookup(ident: str, lineno: int, col: int) -> int:
        try:
            return index[ident]
        except KeyError:
            raise BNNameError(f"undeclared identifier {ident!r}", lineno, col) from None

    exprs = tuple(_Parser(body, lineno, offset, lookup).parse() for lineno, body, offset in rows)
    return tuple(names), exprs
