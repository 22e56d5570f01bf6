"""Small Pratt parser shared by the polynomial and operator grammars.

Grammar: numbers, identifiers, ``+ - * / ^ ( )``.  Evaluation is delegated to
an algebra object (``number``, ``symbol``, ``add``, ``sub``, ``neg``, ``mul``,
``div``, ``power``), so the same parser serves RatFunc and DiffOp.
"""

import re

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, ident, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif ident is not None:
            out.append(("id", ident))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, tokens, alg):
        self.toks = tokens
        self.i = 0
        self.alg = alg

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, got {val!r}")

    def expr(self):
        left = self.term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                right = self.term()
                left = self.alg.add(left, right) if val == "+" else self.alg.sub(left, right)
            else:
                return left

    def term(self):
        left = self.unary()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                right = self.unary()
                left = self.alg.mul(left, right) if val == "*" else self.alg.div(left, right)
            elif kind in ("num", "id") or (kind == "op" and val == "("):
                # implicit multiplication, e.g. 2x or (x-1)D
                right = self.unary()
                left = self.alg.mul(left, right)
            else:
                return left

    def unary(self):
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return self.alg.neg(inner) if val == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            sign = 1
            k2, v2 = self.peek()
            if k2 == "op" and v2 == "-":
                self.take()
                sign = -1
            k3, v3 = self.take()
            if k3 != "num":
                raise ParseError("exponent must be an integer literal")
            return self.alg.power(base, sign * v3)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.alg.number(val)
        if kind == "id":
            v = self.alg.symbol(val)
            if v is None:
                raise ParseError(f"unknown symbol {val!r}")
            return v
        if kind == "op" and val == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise ParseError(f"unexpected token {val!r}")


def parse_expression(text, alg):
    toks = tokenize(text)
    if not toks:
        raise ParseError("empty expression")
    p = _Parser(toks, alg)
    v = p.expr()
    if p.i != len(toks):
        raise ParseError(f"trailing input after token {p.i}")
    return v
