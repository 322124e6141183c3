"""Exact arithmetic in Q(sqrt(c)) for a fixed square-free integer c."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import mpmath

from .algebra import format_rational
from .errors import UsageError


def square_free_split(n):
    """Write the integer ``n`` as ``k^2 * m`` with ``m`` square-free; return (k, m)."""
    if n == 0:
        return 0, 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    k, m = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        k *= p ** (e // 2)
        if e % 2:
            m *= p
        p += 1 if p == 2 else 2
    m *= n
    return k, sign * m


def rational_sqrt(q):
    """sqrt of a rational as ``(r, m)`` meaning ``r * sqrt(m)``, m square-free."""
    q = Fraction(q)
    if q == 0:
        return Fraction(0), 1
    # sqrt(a/b) = sqrt(a*b)/b
    k, m = square_free_split(q.numerator * q.denominator)
    return Fraction(k, q.denominator), m


class Surd:
    """``a + b*sqrt(c)`` with rational a, b and square-free integer c != 0, 1."""

    __slots__ = ("a", "b", "c")

    def __init__(self, a, b, c):
        c = int(c)
        if c in (0, 1) or square_free_split(c)[0] != 1:
            raise UsageError(f"surd radicand must be square-free and not 0 or 1, got {c}")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.c = c

    def _lift(self, other):
        if isinstance(other, Surd):
            if other.c != self.c:
                raise UsageError(f"cannot mix sqrt({self.c}) and sqrt({other.c})")
            return other
        if isinstance(other, (int, Rational)):
            return Surd(other, 0, self.c)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Surd(self.a + o.a, self.b + o.b, self.c)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.c)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Surd(self.a * o.a + self.b * o.b * self.c, self.a * o.b + self.b * o.a, self.c)

    __rmul__ = __mul__

    def conjugate(self):
        return Surd(self.a, -self.b, self.c)

    def norm(self):
        return self.a * self.a - self.b * self.b * self.c

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero surd")
        return Surd(self.a / n, -self.b / n, self.c)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k):
        result = Surd(1, 0, self.c)
        for _ in range(k):
            result = result * self
        return result

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, Surd):
            return (self.a, self.b, self.c) == (other.a, other.b, other.c) or (
                not self.b and not other.b and self.a == other.a)
        if isinstance(other, (int, Rational)):
            return not self.b and self.a == other
        return NotImplemented

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.c))

    def is_rational(self):
        return not self.b

    def is_real(self):
        return self.c > 0 or not self.b

    def approx(self):
        return self.a + self.b * mpmath.sqrt(self.c)

    def to_text(self):
        root = f"sqrt({self.c})"
        if not self.b:
            return format_rational(self.a)
        mag = abs(self.b)
        rad = root if mag == 1 else f"{format_rational(mag)}*{root}"
        if not self.a:
            return ("-" if self.b < 0 else "") + rad
        return f"{format_rational(self.a)} {'-' if self.b < 0 else '+'} {rad}"

    __str__ = to_text

    def __repr__(self):
        return f"Surd({self.to_text()!r})"


def is_exact(v):
    return isinstance(v, (int, Rational, Surd))


def exact_text(v):
    if isinstance(v, Surd):
        return v.to_text()
    return format_rational(v)


