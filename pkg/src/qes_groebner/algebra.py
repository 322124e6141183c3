"""Exact polynomial arithmetic over the rationals.

Three layers:

* ``VarRegistry`` -- the ordered set of ring variables, each tagged with a
  block (ansatz, eigenvalue, parameter).  Registry order *is* the lex
  priority: the first name is the largest variable.
* ``MultiPoly`` -- a sparse polynomial in the registry variables with
  ``fractions.Fraction`` coefficients.
* ``XPoly`` -- a dense polynomial in the spatial variable ``x`` whose
  coefficients are ``MultiPoly`` values over one registry.

Values are immutable; every operation returns a new object.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from .errors import UsageError

SPATIAL = "x"
EIGENVALUE = "lambda"

ANSATZ = "ansatz"
EIGEN = "eigenvalue"
PARAMETER = "parameter"
_BLOCK_RANK = {ANSATZ: 0, EIGEN: 1, PARAMETER: 2}

NEG_INF = float("-inf")


@dataclass(frozen=True)
class VarRegistry:
    """Ordered variable names with their block labels."""

    names: tuple
    blocks: tuple
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(self.names)
        blocks = tuple(self.blocks)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "blocks", blocks)
        if len(names) != len(blocks):
            raise UsageError("registry names and blocks differ in length")
        if len(set(names)) != len(names):
            raise UsageError(f"duplicate variable names in registry {names}")
        ranks = []
        for name, block in zip(names, blocks):
            if block not in _BLOCK_RANK:
                raise UsageError(f"unknown block {block!r} for {name!r}")
            if name == SPATIAL:
                raise UsageError("x is the spatial variable, not a ring variable")
            ranks.append(_BLOCK_RANK[block])
        if ranks != sorted(ranks):
            raise UsageError("registry must list ansatz, then eigenvalue, then parameter variables")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    @classmethod
    def build(cls, ansatz=(), eigenvalue=True, parameters=()):
        names = list(ansatz)
        blocks = [ANSATZ] * len(names)
        if eigenvalue:
            names.append(EIGENVALUE)
            blocks.append(EIGEN)
        names += list(parameters)
        blocks += [PARAMETER] * len(parameters)
        return cls(tuple(names), tuple(blocks))

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self._index

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise UsageError(f"unknown variable {name!r}") from None

    def block_of(self, name):
        return self.blocks[self.index(name)]

    def names_in(self, block):
        return tuple(n for n, b in zip(self.names, self.blocks) if b == block)

    def with_ansatz(self, names):
        """Registry with ``names`` prepended as ansatz variables."""
        if self.names_in(ANSATZ):
            raise UsageError("registry already carries ansatz variables")
        for n in names:
            if n in self:
                raise UsageError(f"ansatz unknown {n!r} collides with an existing variable")
        return VarRegistry(tuple(names) + self.names, (ANSATZ,) * len(names) + self.blocks)

    def without(self, names):
        drop = set(names)
        keep = [(n, b) for n, b in zip(self.names, self.blocks) if n not in drop]
        return VarRegistry(tuple(n for n, _ in keep), tuple(b for _, b in keep))


def _same_registry(a, b):
    if a is not b and a != b:
        raise UsageError(f"registry mismatch: {a.names} vs {b.names}")


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise UsageError(f"coefficient {c!r} is not rational")


def format_rational(c):
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class MultiPoly:
    """Sparse polynomial over Q in the variables of a ``VarRegistry``."""

    __slots__ = ("registry", "terms")

    def __init__(self, registry, terms=None):
        self.registry = registry
        clean = {}
        n = len(registry)
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != n or any(e < 0 for e in mono):
                raise UsageError(f"bad exponent vector {mono} for registry of size {n}")
            c = _as_fraction(c)
            if c:
                clean[mono] = clean.get(mono, 0) + c
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def _raw(cls, registry, terms):
        obj = cls.__new__(cls)
        obj.registry = registry
        obj.terms = terms
        return obj

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, registry):
        return cls._raw(registry, {})

    @classmethod
    def constant(cls, registry, c):
        c = _as_fraction(c)
        return cls._raw(registry, {(0,) * len(registry): c} if c else {})

    @classmethod
    def variable(cls, registry, name, power=1):
        mono = [0] * len(registry)
        mono[registry.index(name)] = power
        return cls._raw(registry, {tuple(mono): Fraction(1)})

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            _same_registry(self.registry, other.registry)
            return other
        if isinstance(other, (int, Rational)):
            return MultiPoly.constant(self.registry, other)
        return NotImplemented

    # ring operations ------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MultiPoly._raw(self.registry, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.registry, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            c = _as_fraction(other)
            if not c:
                return MultiPoly.zero(self.registry)
            return MultiPoly._raw(self.registry, {m: v * c for m, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return MultiPoly._raw(self.registry, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            c = _as_fraction(other)
            if not c:
                raise ZeroDivisionError("division of a polynomial by zero")
            return self * (1 / c)
        if isinstance(other, MultiPoly) and other.is_constant() and other:
            return self * (1 / other.constant_value())
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise UsageError("only non-negative integer powers are supported")
        result = MultiPoly.constant(self.registry, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.registry == other.registry and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self.terms == MultiPoly.constant(self.registry, other).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.registry.names, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"MultiPoly({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    # inspection -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(m) for m in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise UsageError(f"{self} is not a constant")
        return next(iter(self.terms.values()), Fraction(0))

    def variables(self):
        """Names of variables that occur with positive exponent."""
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return {self.registry.names[i] for i in sorted(used)}

    def degree(self, name):
        i = self.registry.index(name)
        return max((m[i] for m in self.terms), default=NEG_INF)

    def total_degree(self):
        return max((sum(m) for m in self.terms), default=NEG_INF)

    def leading_monomial(self):
        if not self.terms:
            raise UsageError("the zero polynomial has no leading monomial")
        return max(self.terms)

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()]

    def sorted_terms(self):
        """Terms in decreasing lex order of the registry."""
        return sorted(self.terms.items(), reverse=True)

    # calculus and substitution -------------------------------------------

    def derivative(self, name):
        i = self.registry.index(name)
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                d = list(m)
                d[i] -= 1
                out[tuple(d)] = c * m[i]
        return MultiPoly._raw(self.registry, out)

    def coefficients_in(self, name):
        """View as a univariate polynomial in ``name``: {power: coefficient}."""
        i = self.registry.index(name)
        parts = {}
        for m, c in self.terms.items():
            d = list(m)
            k = d[i]
            d[i] = 0
            parts.setdefault(k, {})[tuple(d)] = c
        return {k: MultiPoly._raw(self.registry, t) for k, t in parts.items()}

    def substitute(self, values):
        """Replace variables by rationals or ``MultiPoly`` values of the same registry."""
        if not values:
            return self
        idx = {}
        for name, v in values.items():
            i = self.registry.index(name)
            if isinstance(v, MultiPoly):
                _same_registry(self.registry, v.registry)
            else:
                v = MultiPoly.constant(self.registry, v)
            idx[i] = v
        powers = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = idx[i] ** e
            return powers[key]

        out = MultiPoly.zero(self.registry)
        for m, c in self.terms.items():
            kept = list(m)
            term = None
            for i in idx:
                if m[i]:
                    factor = power(i, m[i])
                    term = factor if term is None else term * factor
                    kept[i] = 0
            mono = MultiPoly._raw(self.registry, {tuple(kept): c})
            out = out + (mono if term is None else mono * term)
        return out

    def evaluate(self, values, zero=0):
        """Evaluate with every occurring variable bound to a ring element.

        ``values`` maps names to objects supporting ``+`` and ``*`` with
        ``Fraction`` (Fraction, Surd, mpmath numbers, ...).
        """
        names = self.registry.names
        total = zero
        for m, c in self.terms.items():
            term = c
            for i, e in enumerate(m):
                if e:
                    try:
                        term = term * values[names[i]] ** e
                    except KeyError:
                        raise UsageError(f"no value supplied for {names[i]!r}") from None
            total = total + term
        return total

    def embed(self, registry):
        """Re-express in another registry containing every occurring variable."""
        if registry is self.registry or registry == self.registry:
            return MultiPoly._raw(registry, self.terms)
        mapping = []
        for i, name in enumerate(self.registry.names):
            mapping.append((i, registry.index(name) if name in registry else None))
        out = {}
        n = len(registry)
        for m, c in self.terms.items():
            new = [0] * n
            for i, j in mapping:
                if m[i]:
                    if j is None:
                        raise UsageError(
                            f"variable {self.registry.names[i]!r} missing from target registry")
                    new[j] = m[i]
            out[tuple(new)] = c
        return MultiPoly._raw(registry, out)

    # normalization and text ----------------------------------------------

    def primitive(self):
        """Integer-primitive multiple with positive leading coefficient."""
        if not self.terms:
            raise UsageError("cannot normalize the zero polynomial")
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        nums = [int(c * den) for c in self.terms.values()]
        g = 0
        for v in nums:
            g = math.gcd(g, v)
        scale = Fraction(den, g)
        if self.leading_coefficient() < 0:
            scale = -scale
        return self * scale

    def monic(self):
        return self * (1 / self.leading_coefficient())

    def to_text(self):
        if not self.terms:
            return "0"
        names = self.registry.names
        pieces = []
        for m, c in self.sorted_terms():
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(names[i])
                elif e:
                    factors.append(f"{names[i]}^{e}")
            mag = abs(c)
            if not factors:
                body = format_rational(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = format_rational(mag) + "*" + "*".join(factors)
            pieces.append((c < 0, body))
        neg, body = pieces[0]
        text = ("-" if neg else "") + body
        for neg, body in pieces[1:]:
            text += (" - " if neg else " + ") + body
        return text


def mp_arith(kind, f, g=None):
    """Ring operation by name: add, sub, mul or neg."""
    if kind == "neg":
        return -f
    if not isinstance(g, MultiPoly) or not isinstance(f, MultiPoly):
        raise UsageError("mp_arith expects two MultiPoly operands")
    _same_registry(f.registry, g.registry)
    if kind == "add":
        return f + g
    if kind == "sub":
        return f - g
    if kind == "mul":
        return f * g
    raise UsageError(f"unknown operation {kind!r}")


def content_normalize(f):
    """Integer-primitive form of ``f`` with positive leading coefficient.

    >>> from fractions import Fraction as F
    >>> reg = VarRegistry.build()
    >>> lam = MultiPoly.variable(reg, "lambda")
    >>> content_normalize(F(1, 2) * lam**2 + 5 * lam + F(17, 2)).to_text()
    'lambda^2 + 10*lambda + 17'
    """
    return f.primitive()


class XPoly:
    """Polynomial in ``x`` with ``MultiPoly`` coefficients (index = degree)."""

    __slots__ = ("registry", "coeffs")

    def __init__(self, registry, coeffs=()):
        self.registry = registry
        cs = []
        for c in coeffs:
            if isinstance(c, MultiPoly):
                _same_registry(registry, c.registry)
            else:
                c = MultiPoly.constant(registry, c)
            cs.append(c)
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls, registry, power=1):
        return cls(registry, [0] * power + [1])

    @classmethod
    def constant(cls, registry, c):
        return cls(registry, [c])

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def coefficient(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return MultiPoly.zero(self.registry)

    def leading(self):
        if not self.coeffs:
            raise UsageError("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def _coerce(self, other):
        if isinstance(other, XPoly):
            _same_registry(self.registry, other.registry)
            return other
        if isinstance(other, (MultiPoly, int, Rational)):
            return XPoly(self.registry, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return XPoly(self.registry, [self.coefficient(k) + other.coefficient(k) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return XPoly(self.registry, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (MultiPoly, int, Rational)):
            return XPoly(self.registry, [c * other for c in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return XPoly(self.registry)
        out = [MultiPoly.zero(self.registry)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return XPoly(self.registry, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        result = XPoly.constant(self.registry, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, XPoly):
            return self.registry == other.registry and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.registry.names, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"XPoly({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    def derivative(self, var=SPATIAL):
        if var == SPATIAL:
            return XPoly(self.registry, [c * k for k, c in enumerate(self.coeffs)][1:])
        return XPoly(self.registry, [c.derivative(var) for c in self.coeffs])

    def antiderivative(self):
        """Antiderivative in x with zero constant term."""
        return XPoly(self.registry, [0] + [c * Fraction(1, k + 1) for k, c in enumerate(self.coeffs)])

    def map_coeffs(self, fn, registry=None):
        registry = registry or self.registry
        return XPoly(registry, [fn(c) for c in self.coeffs])

    def substitute(self, values):
        return self.map_coeffs(lambda c: c.substitute(values))

    def embed(self, registry):
        return self.map_coeffs(lambda c: c.embed(registry), registry)

    def variables(self):
        used = set()
        for c in self.coeffs:
            used |= c.variables()
        return used

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def to_text(self):
        if not self.coeffs:
            return "0"
        pieces = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            xs = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            pieces.append(_term_text(c.to_text(), len(c.terms) > 1, c.is_constant(), xs))
        return _join_signed(pieces)


def _term_text(coeff_text, compound, is_const, xs):
    """Return (negative, body) for ``coeff * xs``."""
    if compound:
        return False, f"({coeff_text})" + (f"*{xs}" if xs else "")
    neg = coeff_text.startswith("-")
    mag = coeff_text[1:] if neg else coeff_text
    if not xs:
        return neg, mag
    if mag == "1":
        return neg, xs
    return neg, f"{mag}*{xs}"


def _join_signed(pieces):
    neg, body = pieces[0]
    text = ("-" if neg else "") + body
    for neg, body in pieces[1:]:
        text += (" - " if neg else " + ") + body
    return text


def mp_derivative(f, var):
    """Formal partial derivative of a MultiPoly or XPoly."""
    if isinstance(f, XPoly):
        if var != SPATIAL and var not in f.registry:
            raise UsageError(f"unknown variable {var!r}")
        return f.derivative(var)
    if var == SPATIAL:
        return MultiPoly.zero(f.registry)
    return f.derivative(var)


def x_coefficients(p):
    """Nonzero coefficients of ``p`` as (degree, MultiPoly), highest degree first."""
    return [(k, c) for k, c in reversed(list(enumerate(p.coeffs))) if c]


def from_x_coefficients(registry, pairs):
    """Reassemble an XPoly from (degree, coefficient) pairs."""
    if not pairs:
        return XPoly(registry)
    top = max(k for k, _ in pairs)
    cs = [MultiPoly.zero(registry)] * (top + 1)
    for k, c in pairs:
        cs[k] = cs[k] + c
    return XPoly(registry, cs)
