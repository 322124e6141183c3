"""Dense univariate polynomials over Q as coefficient lists (index = degree)."""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from .algebra import MultiPoly
from .errors import UsageError


def trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def degree(p):
    return len(p) - 1 if p else -1


def from_multipoly(f, var):
    """Coefficient list of ``f`` viewed in ``var`` alone (other variables forbidden)."""
    extra = f.variables() - {var}
    if extra:
        raise UsageError(f"{f} involves {sorted(extra)} besides {var}")
    if not f:
        return []
    parts = f.coefficients_in(var)
    top = max(parts)
    return trim([parts[k].constant_value() if k in parts else Fraction(0) for k in range(top + 1)])


def to_multipoly(p, registry, var):
    out = MultiPoly.zero(registry)
    for k, c in enumerate(p):
        if c:
            out = out + MultiPoly.variable(registry, var, k) * c
    return out


def sub(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def divmod_poly(a, b):
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = [Fraction(c) for c in trim(a)]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = Fraction(b[-1])
    while len(a) >= len(b):
        k = len(a) - len(b)
        c = a[-1] / lb
        q[k] = c
        for i, bc in enumerate(b):
            a[i + k] -= c * bc
        a = trim(a)
    return trim(q), a


def monic(p):
    p = trim(p)
    if not p:
        return p
    lc = Fraction(p[-1])
    return [Fraction(c) / lc for c in p]


def gcd(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def derivative(p):
    return trim([c * k for k, c in enumerate(p)][1:])


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def primitive(p):
    """Integer-primitive multiple with positive leading coefficient."""
    p = trim(p)
    if not p:
        return p
    den = 1
    for c in p:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in p]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if ints[-1] < 0:
        g = -g
    return [Fraction(v, g) for v in ints]


def squarefree_decomposition(p):
    """Yun's algorithm: [(factor, multiplicity), ...] with monic square-free factors."""
    p = monic(p)
    if degree(p) < 1:
        return []
    out = []
    dp = derivative(p)
    a = gcd(p, dp)
    b = divmod_poly(p, a)[0]
    c = divmod_poly(dp, a)[0]
    d = sub(c, derivative(b))
    k = 1
    while degree(b) > 0:
        a = gcd(b, d)
        if degree(a) > 0:
            out.append((a, k))
        b = divmod_poly(b, a)[0]
        c = divmod_poly(d, a)[0]
        d = sub(c, derivative(b))
        k += 1
    return out


def cauchy_bound(p):
    p = trim(p)
    lc = abs(Fraction(p[-1]))
    return 1 + max((abs(Fraction(c)) / lc for c in p[:-1]), default=Fraction(0))


def numeric_roots(p, dps):
    """All complex roots of a square-free ``p`` to ``dps`` digits."""
    p = trim(p)
    if degree(p) < 1:
        return []
    with mpmath.workdps(dps + 20):
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in map(Fraction, reversed(p))]
        if degree(p) == 1:
            return [-coeffs[1] / coeffs[0]]
        return list(mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps + 100))


def rational_roots(p, dps=50):
    """Rational roots of ``p`` (without multiplicity), exactly verified.

    Candidates come from the real numeric roots of the square-free part,
    snapped to the nearest fraction whose denominator divides the leading
    coefficient of the primitive form (rational root theorem); each candidate
    is accepted only if it is an exact root.
    """
    p = trim(p)
    if degree(p) < 1:
        return []
    roots = []
    if p[0] == 0:
        roots.append(Fraction(0))
    sq = [Fraction(1)]
    for f, _ in squarefree_decomposition(p):
        sq = mul(sq, f)
    prim = primitive(sq)
    lead = int(abs(prim[-1]))
    bound = cauchy_bound(prim)
    for r in numeric_roots(prim, dps):
        if abs(mpmath.im(r)) > mpmath.mpf(10) ** (-dps // 2):
            continue
        re = mpmath.re(r)
        if abs(re) > mpmath.mpf(bound.numerator) / bound.denominator + 1:
            continue
        guess = mpf_to_fraction(re)
        cand = guess.limit_denominator(lead)
        if cand not in roots and evaluate(prim, cand) == 0:
            roots.append(cand)
    return sorted(roots)


def mpf_to_fraction(v):
    """Exact rational value of a binary mpmath float."""
    sign, man, exp, _ = mpmath.mpf(v)._mpf_
    value = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -value if sign else value
