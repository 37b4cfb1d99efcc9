"""Polynomial expressions: a small precedence-climbing parser and its printer.

Grammar, loosest first::

    sum     := neg (('+' | '-') neg)*
    neg     := '-' neg | product
    product := power ('*' operand)*        operand := '-' operand | power
    power   := atom ('^' INT)?
    atom    := INT | INT '/' INT | VAR | '(' sum ')'

VAR is x1..xm (or xi1..xim for fiber coordinates).  Division only appears
inside rational literals.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError, UnknownVariable
from .exact import Poly, Universe

_TOKEN = re.compile(
    r"\s*(?:(?P<rat>\d+\s*/\s*\d+)|(?P<int>\d+)|(?P<var>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()/]))"
)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if mt is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = mt.lastgroup
        start = mt.start(kind)
        tokens.append((kind, mt.group(kind), start))
        pos = mt.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, universe: Universe):
        self.tokens = tokenize(text)
        self.i = 0
        self.uni = universe

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> Poly:
        value = self.sum()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return value

    def sum(self) -> Poly:
        value = self.neg()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.neg()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def neg(self) -> Poly:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.neg()
        return self.product()

    def product(self) -> Poly:
        value = self.power()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                value = value * self.operand()
            elif kind == "op" and val == "/":
                raise ParseError("division is only allowed inside rational literals", pos)
            else:
                return value

    def operand(self) -> Poly:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.operand()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise ParseError("exponent must be a non-negative integer literal", pos)
            base = base ** int(val)
            kind, val, pos = self.peek()
            if kind == "op" and val == "^":
                raise ParseError("chained exponents need parentheses", pos)
        return base

    def atom(self) -> Poly:
        kind, val, pos = self.take()
        if kind == "int":
            return self.uni.const(int(val))
        if kind == "rat":
            num, den = (s.strip() for s in val.split("/"))
            if int(den) == 0:
                raise ParseError("zero denominator", pos)
            return self.uni.const(Fraction(int(num), int(den)))
        if kind == "var":
            return self._variable(val, pos)
        if kind == "op" and val == "(":
            value = self.sum()
            self.expect_op(")")
            return value
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)

    def _variable(self, name: str, pos: int) -> Poly:
        mt = re.fullmatch(r"(x|xi)([1-9]\d*)", name)
        if mt is None:
            raise UnknownVariable(f"unknown variable {name!r}", pos)
        idx = int(mt.group(2)) - 1
        if idx >= self.uni.m:
            raise UnknownVariable(f"variable {name!r} outside dimension {self.uni.m}", pos)
        return self.uni.x(idx) if mt.group(1) == "x" else self.uni.xi(idx)


def parse_expression(text: str, m: int) -> Poly:
    return _Parser(text, Universe(m)).parse()


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    """Canonical text form; ``parse_expression`` reads it back to the same Poly."""
    if not p:
        return "0"
    m = p.nvars // 2
    names = Universe(m).names()
    parts = []
    for e, c in p.sorted_terms():
        mono = "*".join(
            names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
        )
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{_format_coeff(mag)}*{mono}"
        else:
            body = _format_coeff(mag)
        if not parts:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(parts)
