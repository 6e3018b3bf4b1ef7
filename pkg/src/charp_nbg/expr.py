"""A small expression language for tower elements.

Grammar::

    expr   := ['-'] term (('+' | '-') term)*
    term   := power (('*' | '·') power)*
    power  := atom ('^' ['-'] INT)?
    atom   := INT | NAME | '(' expr ')'

``NAME`` is a generator name of the tower, ``T`` (the base uniformizer) or
``x`` (the generator of the base constant field when it is not prime).
Integer literals are read modulo p.  Negative exponents invert.
"""

from __future__ import annotations

import re

from .basefield import INF, FqElement, LaurentSeries
from .errors import DegenerateInput

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text):
    tokens = []
    for num, name, sym in _TOKEN.findall(text):
        if num:
            tokens.append(("int", int(num)))
        elif name:
            tokens.append(("name", name))
        elif sym.strip():
            tokens.append(("sym", sym))
    tokens.append(("end", None))
    return tokens


class _Parser:
    def __init__(self, tower, text, level):
        self.tower = tower
        self.level = level
        self.tokens = _tokenize(text)
        self.pos = 0
        self.names = {s.name: k for k, s in enumerate(tower.steps[:level], start=1)}

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, sym):
        tok = self.take()
        if tok != ("sym", sym):
            raise DegenerateInput(f"expected {sym!r}, found {tok[1]!r}")

    def parse(self):
        value = self.expr()
        if self.peek()[0] != "end":
            raise DegenerateInput(f"unexpected {self.peek()[1]!r}")
        return value

    def expr(self):
        neg = False
        if self.peek() == ("sym", "-"):
            self.take()
            neg = True
        value = self.term()
        if neg:
            value = -value
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.power()
        while self.peek() in (("sym", "*"), ("sym", "·")):
            self.take()
            value = value * self.power()
        return value

    def power(self):
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            sign = 1
            if self.peek() == ("sym", "-"):
                self.take()
                sign = -1
            kind, n = self.take()
            if kind != "int":
                raise DegenerateInput("exponent must be an integer")
            return base ** (sign * n)
        return base

    def atom(self):
        kind, val = self.take()
        t = self.tower
        if kind == "int":
            return t.embed(val, self.level)
        if kind == "name":
            if val == "T":
                return t.T(self.level)
            if val == "x":
                if t.base.f0 == 1:
                    raise DegenerateInput("'x' names the constant generator only over a non-prime field")
                return t.constant(t.base.gen(), self.level)
            if val in self.names:
                return t.embed(t.gen(self.names[val]), self.level)
            raise DegenerateInput(f"unknown name {val!r}")
        if (kind, val) == ("sym", "("):
            value = self.expr()
            self.expect(")")
            return value
        raise DegenerateInput(f"unexpected {val!r}")


def parse_element(tower, text: str, level=None):
    """Parse ``text`` into an element of ``tower`` at ``level`` (default: top)."""
    level = tower.height if level is None else level
    return _Parser(tower, text, level).parse()


def _monomial(names, exps):
    parts = []
    for name, j in zip(names, exps):
        if j == 1:
            parts.append(name)
        elif j > 1:
            parts.append(f"{name}^{j}")
    return "*".join(parts)


def _constant(c: FqElement):
    s = repr(c)
    return f"({s})" if "+" in s else s


def format_element(tower, x) -> str:
    """Canonical text form: flattened basis monomials times powers of T.

    Exact elements round-trip through :func:`parse_element`.
    """
    if isinstance(x, LaurentSeries):
        return repr(x)
    names = tower.names()[:x.level]
    exps = tower.basis_exponents(x.level)
    parts = []
    vec = tower.to_vector(x, x.level)
    tail = min(c.prec for c in vec)
    for e, c in zip(exps, vec):
        mono = _monomial(names, e)
        for k, a in c.terms():
            if k >= tail:
                continue
            factors = []
            if a != 1 or (not mono and k == 0):
                factors.append(_constant(a))
            if mono:
                factors.append(mono)
            if k == 1:
                factors.append("T")
            elif k:
                factors.append(f"T^{k}")
            parts.append("*".join(factors))
    if tail != INF:
        parts.append(f"O(T^{tail})")
    return " + ".join(parts) or "0"
