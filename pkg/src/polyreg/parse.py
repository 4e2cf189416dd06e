"""Text syntax for polynomials.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" unary) | ("/" INT))*
    unary  := "-" unary | power
    power  := atom ("^" INT)?
    atom   := INT | NAME | "(" expr ")" | "C(" expr "," INT ")"

``C(e, k)`` is the binomial polynomial ``e (e-1) ... (e-k+1) / k!``.
A bare ``C`` not followed by ``(`` is an ordinary variable.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .poly import Polynomial

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(.))")


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m.group(0).strip() == "":
                break
            start = m.start(m.lastindex)
            if m.group(1):
                self.tokens.append(("int", m.group(1), start))
            elif m.group(2):
                self.tokens.append(("name", m.group(2), start))
            else:
                ch = m.group(3)
                if ch not in "+-*/^(),":
                    raise ParseError(f"unexpected character {ch!r}", start)
                self.tokens.append(("op", ch, start))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def peek(self, offset: int = 0):
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, v, pos = self.take()
        if v != value or kind != "op":
            raise ParseError(f"expected {value!r}", pos)

    def integer(self) -> int:
        kind, v, pos = self.take()
        if kind != "int":
            raise ParseError("expected integer", pos)
        return int(v)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        p = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {v!r}", pos)
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            if op == "*":
                p = p * self.unary()
                continue
            den_pos = self.peek()[2]
            den = self.integer()
            if den == 0:
                raise ParseError("zero denominator", den_pos)
            p = p / den
        return p

    def unary(self) -> Polynomial:
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[0] == "op" and self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return base ** self.integer()
        return base

    def atom(self) -> Polynomial:
        kind, v, pos = self.take()
        if kind == "int":
            return Polynomial.constant(Fraction(int(v)))
        if kind == "name":
            if v == "C" and self.peek()[0] == "op" and self.peek()[1] == "(":
                self.take()
                arg = self.expr()
                self.expect(",")
                k = self.integer()
                self.expect(")")
                p = Polynomial.constant(1, arg.variables)
                for j in range(k):
                    p = p * (arg - j)
                return p / math.factorial(k)
            return Polynomial.var(v)
        if kind == "op" and v == "(":
            p = self.expr()
            self.expect(")")
            return p
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected token {v!r}", pos)


def parse_polynomial(text: str) -> Polynomial:
    """Parse ``text``; raises :class:`ParseError` carrying the offending offset."""
    return _Parser(text).parse()
