"""Polynomial expressions over named variables.

Grammar (whitespace is ignored)::

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := ("-" | "+") factor | atom ("^" exponent)?
    atom   := INTEGER | NAME | "(" expr ")"
    exponent := INTEGER | "(" "-"? INTEGER ")" | "-" INTEGER

Negative exponents are allowed on monomials only, so Laurent monomials such as
``x*y^(-1)`` parse.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ParseError

Monomial = Tuple[Tuple[str, int], ...]

_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S)")


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    d: Dict[str, int] = dict(a)
    for v, k in b:
        d[v] = d.get(v, 0) + k
    return tuple(sorted((v, k) for v, k in d.items() if k))


@dataclass(frozen=True)
class Polynomial:
    """Canonical term map: sorted monomial tuples to nonzero integers."""

    terms: Dict[Monomial, int]

    @staticmethod
    def make(terms: Dict[Monomial, int]) -> "Polynomial":
        return Polynomial({m: c for m, c in sorted(terms.items()) if c})

    @staticmethod
    def constant(c: int) -> "Polynomial":
        return Polynomial.make({(): c})

    def __add__(self, other: "Polynomial") -> "Polynomial":
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return Polynomial.make(t)

    def __neg__(self) -> "Polynomial":
        return Polynomial.make({m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        t: Dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                t[m] = t.get(m, 0) + c1 * c2
        return Polynomial.make(t)

    def power(self, k: int) -> "Polynomial":
        if k < 0:
            if len(self.terms) != 1 or abs(next(iter(self.terms.values()))) != 1:
                return None  # caller reports the error with a position
            (m, c), = self.terms.items()
            return Polynomial.make({tuple((v, e * k) for v, e in m): c ** (-k)})
        out = Polynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def variables(self) -> List[str]:
        return sorted({v for m in self.terms for v, _ in m})

    def __str__(self) -> str:
        return format_polynomial(self)


def _format_monomial(m: Monomial) -> str:
    parts = []
    for v, k in m:
        if k == 1:
            parts.append(v)
        elif k > 0:
            parts.append(f"{v}^{k}")
        else:
            parts.append(f"{v}^({k})")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    """Inverse of :func:`parse_polynomial` up to term order."""
    if not p.terms:
        return "0"
    out = ""
    for i, (m, c) in enumerate(sorted(p.terms.items(), key=lambda t: (-sum(k for _, k in t[0]), t[0]))):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = _format_monomial(m)
        if not body:
            body = str(a)
        elif a != 1:
            body = f"{a}*{body}"
        if i == 0:
            out = ("-" if c < 0 else "") + body
        else:
            out += f" {sign} {body}"
    return out


class _Parser:
    def __init__(self, text: str, variables: Optional[Sequence[str]]):
        self.text = text
        self.variables = set(variables) if variables is not None else None
        self.tokens: List[Tuple[str, str, int]] = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            start = m.start()
            if m.group(1):
                self.tokens.append(("int", m.group(1), start))
            elif m.group(2):
                self.tokens.append(("name", m.group(2), start))
            else:
                ch = m.group(3)
                if ch not in "+-*^()":
                    raise ParseError(f"unknown symbol {ch!r}", start)
                self.tokens.append(("op", ch, start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def error_offset(self) -> int:
        if self.i < len(self.tokens):
            return self.tokens[self.i][2]
        if self.tokens:
            return self.tokens[-1][2]
        return 0

    def fail(self, message: str):
        raise ParseError(message, self.error_offset())

    def take(self, value: Optional[str] = None):
        t = self.peek()
        if t is None:
            self.fail("unexpected end of input")
        if value is not None and t[1] != value:
            self.fail(f"expected {value!r}")
        self.i += 1
        return t

    def parse(self) -> Polynomial:
        if not self.tokens:
            self.fail("empty expression")
        p = self.expr()
        if self.peek() is not None:
            self.fail(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek() is not None and self.peek()[1] in "+-" and self.peek()[0] == "op":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p + (-q)
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek() is not None and self.peek()[:2] == ("op", "*"):
            self.take()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        t = self.peek()
        if t is not None and t[0] == "op" and t[1] in "+-":
            self.take()
            f = self.factor()
            return -f if t[1] == "-" else f
        base = self.atom()
        if self.peek() is not None and self.peek()[:2] == ("op", "^"):
            self.take()
            at = self.peek()
            k = self.exponent()
            p = base.power(k)
            if p is None:
                raise ParseError("negative exponent on a non-monomial", at[2])
            return p
        return base

    def exponent(self) -> int:
        t = self.peek()
        if t is None:
            self.fail("missing exponent")
        if t[:2] == ("op", "("):
            self.take()
            sign = 1
            if self.peek() is not None and self.peek()[:2] == ("op", "-"):
                self.take()
                sign = -1
            k = self.integer()
            self.take(")")
            return sign * k
        if t[:2] == ("op", "-"):
            self.take()
            return -self.integer()
        return self.integer()

    def integer(self) -> int:
        t = self.peek()
        if t is None or t[0] != "int":
            self.fail("exponent must be an integer")
        self.take()
        return int(t[1])

    def atom(self) -> Polynomial:
        t = self.peek()
        if t is None:
            self.fail("unexpected end of input")
        if t[0] == "int":
            self.take()
            return Polynomial.constant(int(t[1]))
        if t[0] == "name":
            if self.variables is not None and t[1] not in self.variables:
                self.fail(f"unknown variable {t[1]!r}")
            self.take()
            return Polynomial.make({((t[1], 1),): 1})
        if t[1] == "(":
            self.take()
            p = self.expr()
            if self.peek() is None or self.peek()[1] != ")":
                self.fail("unbalanced parenthesis")
            self.take()
            return p
        self.fail(f"unexpected {t[1]!r}")


def parse_polynomial(text: str, variables: Optional[Sequence[str]] = None) -> Polynomial:
    """Parse ``text``; if ``variables`` is given, other names are errors."""
    return _Parser(text, variables).parse()
