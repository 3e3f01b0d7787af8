"""Text form for polynomials: expanded sums with ``^`` powers and explicit ``*``.

Example: ``x2^2 - (4*x1 + 1)*x2 + (6*x1)``.  Rationals print as ``a/b``.
The writer is deterministic (descending powers of the top variable, inner
coefficients recursively in the same style); the parser accepts any
sum/product/power expression over rationals and ``xK`` names.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .poly import MPoly, Poly, as_poly, format_fraction, make_poly, poly_add, poly_mul, poly_neg, poly_pow, variable


class PolyParseError(ValueError):
    pass


def format_poly(f) -> str:
    f = as_poly(f)
    if isinstance(f, Fraction):
        return format_fraction(f)
    parts = []
    for k in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[k]
        if isinstance(c, Fraction) and c == 0:
            continue
        sign, body = _term(c, f.var, k)
        if not parts:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(("+ " if sign == "+" else "- ") + body)
    return " ".join(parts) if parts else "0"


def _term(c, var: int, k: int):
    if k == 0:
        if isinstance(c, Fraction):
            return ("-" if c < 0 else "+"), format_fraction(abs(c))
        return "+", "(" + format_poly(c) + ")"
    xs = f"x{var}" if k == 1 else f"x{var}^{k}"
    if isinstance(c, Fraction):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if mag == 1:
            return sign, xs
        return sign, f"{format_fraction(mag)}*{xs}"
    return "+", f"({format_poly(c)})*{xs}"


_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d+)|([+\-*^()/]))")


def _tokenize(s: str):
    pos = 0
    tokens = []
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            if s[pos:].strip():
                raise PolyParseError(f"unexpected character at position {pos}: {s[pos:pos+10]!r}")
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1))))
        elif m.group(2) is not None:
            idx = int(m.group(2)[1:])
            if idx < 1:
                raise PolyParseError(f"bad variable name {m.group(2)!r}")
            tokens.append(("var", idx))
        else:
            tokens.append((m.group(3), None))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.take()
        if tok[0] != kind:
            raise PolyParseError(f"expected {kind!r}, got {tok[0]!r}")
        return tok

    def expr(self) -> Poly:
        sign = 1
        while self.peek()[0] in ("+", "-"):
            if self.take()[0] == "-":
                sign = -sign
        acc = self.term()
        if sign < 0:
            acc = poly_neg(acc)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = poly_add(acc, t if op == "+" else poly_neg(t))
        return acc

    def term(self) -> Poly:
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = poly_mul(acc, self.factor())
        return acc

    def factor(self) -> Poly:
        base = self.primary()
        while self.peek()[0] == "^":
            self.take()
            kind, val = self.take()
            if kind != "int":
                raise PolyParseError("exponent must be a nonnegative integer")
            base = poly_pow(base, val)
        return base

    def primary(self) -> Poly:
        kind, val = self.take()
        if kind == "-":
            return poly_neg(self.primary())
        if kind == "int":
            if self.peek()[0] == "/":
                self.take()
                k2, v2 = self.take()
                if k2 != "int":
                    raise PolyParseError("denominator must be an integer")
                if v2 == 0:
                    raise PolyParseError("zero denominator")
                return Fraction(val, v2)
            return Fraction(val)
        if kind == "var":
            return variable(val)
        if kind == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise PolyParseError(f"unexpected token {kind!r}")


def parse_poly(s: str) -> Poly:
    tokens = _tokenize(s)
    if not tokens:
        raise PolyParseError("empty polynomial text")
    p = _Parser(tokens)
    out = p.expr()
    if p.pos != len(tokens):
        raise PolyParseError(f"trailing input after position {p.pos}")
    return out
