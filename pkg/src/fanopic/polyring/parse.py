"""Parser for the registry polynomial grammar.

Integers, identifiers, ``+ - * ^``, parentheses and juxtaposition.  The only
non-rational symbols are ``sqrt2`` and ``omega``.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .fields import OMEGA, QQ, SQRT2
from .poly import MultiPoly

EXTENSION_SYMBOLS = {"sqrt2": SQRT2, "omega": OMEGA}

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class PolyParseError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyParseError(f"cannot tokenize {text[pos:]!r}")
        num, ident, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif ident is not None:
            out.append(("id", ident))
        else:
            if op not in "+-*^()":
                raise PolyParseError(f"unexpected character {op!r} in {text!r}")
            out.append(("op", op))
        pos = m.end()
    return out


def infer_field(texts: Iterable[str]):
    fields = set()
    for t in texts:
        for kind, val in _tokenize(t):
            if kind == "id" and val in EXTENSION_SYMBOLS:
                fields.add(EXTENSION_SYMBOLS[val])
    if len(fields) > 1:
        raise PolyParseError("at most one extension symbol may appear in a system")
    return fields.pop() if fields else QQ


class _Parser:
    def __init__(self, text: str, variables: Sequence[str], field):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.vars = tuple(variables)
        self.field = field

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok != ("op", op):
            raise PolyParseError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> MultiPoly:
        if not self.toks:
            raise PolyParseError("empty polynomial")
        p = self.expr()
        if self.i != len(self.toks):
            raise PolyParseError(f"trailing input in {self.text!r}")
        return p

    def expr(self) -> MultiPoly:
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> MultiPoly:
        acc = self.power()
        while True:
            tok = self.peek()
            if tok == ("op", "*"):
                self.take()
                acc = acc * self.power()
            elif tok[0] in ("num", "id") or tok == ("op", "("):
                acc = acc * self.power()
            else:
                return acc

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise PolyParseError(f"exponent must be a nonnegative integer in {self.text!r}")
            base = base ** int(val)
        return base

    def atom(self) -> MultiPoly:
        kind, val = self.take()
        if kind == "num":
            return MultiPoly.constant(self.field, self.vars, int(val))
        if kind == "id":
            if val in EXTENSION_SYMBOLS:
                if EXTENSION_SYMBOLS[val] != self.field:
                    raise PolyParseError(f"{val} is not in {self.field.name}")
                return MultiPoly.constant(self.field, self.vars, self.field.gen)
            if val not in self.vars:
                raise PolyParseError(f"unknown variable {val!r} in {self.text!r}")
            return MultiPoly.var(self.field, self.vars, val)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        raise PolyParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_poly(text: str, variables: Sequence[str], field=None) -> MultiPoly:
    if field is None:
        field = infer_field([text])
    return _Parser(text, variables, field).parse()


def parse_system(texts: Sequence[str], variables: Sequence[str], field=None) -> list[MultiPoly]:
    if field is None:
        field = infer_field(texts)
    return [parse_poly(t, variables, field) for t in texts]
