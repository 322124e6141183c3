"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := ("+" | "-") factor | power
    power  := atom ("^" INT)?
    atom   := INT ("/" INT)? | NAME | "(" expr ")"

Division is only allowed by a nonzero constant.  ``x`` is the spatial
variable.  Every other name must be known to the
registry passed in, or is collected when no registry is given.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import EIGENVALUE, PARAMETER, SPATIAL, MultiPoly, VarRegistry, XPoly
from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")
NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def tokenize(text, line=1, col_offset=0):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        col = m.start(m.lastindex) + 1 + col_offset
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num), col))
        elif name is not None:
            tokens.append(("name", name, col))
        else:
            if op not in "+-*^/()":
                raise ParseError(f"unexpected character {op!r}", line, col)
            tokens.append(("op", op, col))
        pos = m.end()
    tokens.append(("end", None, len(text) + 1 + col_offset))
    return tokens


def collect_names(text, line=1, col_offset=0):
    """Distinct non-spatial names in order of first appearance."""
    seen = []
    for kind, value, _ in tokenize(text, line, col_offset):
        if kind == "name" and value != SPATIAL and value not in seen:
            seen.append(value)
    return seen


class _Parser:
    def __init__(self, text, registry, line, col_offset, allow_x):
        self.tokens = tokenize(text, line, col_offset)
        self.pos = 0
        self.registry = registry
        self.line = line
        self.allow_x = allow_x

    def error(self, message, tok=None):
        tok = tok or self.tokens[self.pos]
        raise ParseError(message, self.line, tok[2])

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            self.error(f"expected {op!r}", tok)

    def parse(self):
        value = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()
            rhs = self.factor()
            if op[1] == "*":
                value = value * rhs
                continue
            if rhs.degree > 0 or not rhs.coefficient(0).is_constant():
                self.error("division is only allowed by a constant", op)
            c = rhs.coefficient(0).constant_value()
            if not c:
                self.error("division by zero", op)
            value = value * (1 / c)
        return value

    def factor(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            inner = self.factor()
            return -inner if tok[1] == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            exp_tok = self.take()
            if exp_tok[0] != "num":
                self.error("exponent must be a non-negative integer literal", exp_tok)
            return base ** exp_tok[1]
        return base

    def atom(self):
        tok = self.take()
        kind, value, _ = tok
        reg = self.registry
        if kind == "num":
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "num":
                    self.error("fraction literal needs an integer denominator", den)
                if den[1] == 0:
                    self.error("zero denominator", den)
                return XPoly.constant(reg, Fraction(value, den[1]))
            return XPoly.constant(reg, value)
        if kind == "name":
            if value == SPATIAL:
                if not self.allow_x:
                    self.error("x is not allowed here", tok)
                return XPoly.x(reg)
            if value not in reg:
                self.error(f"unknown name {value!r}", tok)
            return XPoly.constant(reg, MultiPoly.variable(reg, value))
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "end":
            self.error("unexpected end of expression", tok)
        self.error(f"unexpected token {value!r}", tok)


def parse_xpoly(text, registry=None, line=1, col_offset=0):
    """Parse an expression in ``x`` and registry variables into an ``XPoly``.

    Without a registry, one is built from the names that occur: ``lambda``
    becomes the eigenvalue variable and every other name a parameter.
    """
    if registry is None:
        names = collect_names(text, line, col_offset)
        params = [n for n in names if n != EIGENVALUE]
        registry = VarRegistry.build(eigenvalue=EIGENVALUE in names, parameters=params)
    return _Parser(text, registry, line, col_offset, allow_x=True).parse()


def parse_poly(text, registry):
    """Parse an expression without ``x`` into a ``MultiPoly``."""
    xp = _Parser(text, registry, 1, 0, allow_x=False).parse()
    return xp.coefficient(0)


def parameter_registry(names):
    return VarRegistry(tuple(names), (PARAMETER,) * len(names))
