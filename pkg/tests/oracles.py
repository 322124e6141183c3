"""Independent reference computations for the acceptance and property tests.

Nothing here imports the package.  Polynomials in x are lists of Fractions
(index = power); polynomials in lambda are lists as well.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def padd(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def pscale(a, c):
    return trim([c * v for v in a])


def pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def pderiv(a):
    return trim([k * v for k, v in enumerate(a)][1:])


def trim(a):
    a = [Fraction(v) for v in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def square_completion(V):
    """W and C with V = W^2 + C, W monic of degree n, deg C < n (V monic of degree 2n)."""
    V = trim(V)
    n = (len(V) - 1) // 2
    W = [Fraction(0)] * n + [Fraction(1)]
    for i in range(n - 1, -1, -1):
        gap = padd(V, pscale(pmul(W, W), -1))
        c = gap[n + i] if n + i < len(gap) else Fraction(0)
        W[i] += c / 2
    C = padd(V, pscale(pmul(W, W), -1))
    assert len(C) <= n
    return W, C


def ode_coefficients(V, lam, sign):
    """A1, A0 of P'' + A1 P' + A0 P = 0 for the potential V at eigenvalue ``lam``."""
    W, C = square_completion(V)
    C = padd(C, [-lam])
    if sign > 0:
        return pscale(W, 2), padd(pderiv(W), pscale(C, -1))
    return pscale(W, -2), pscale(padd(pderiv(W), C), -1)


def apply_ode(V, lam, sign, P):
    A1, A0 = ode_coefficients(V, lam, sign)
    return padd(padd(pderiv(pderiv(P)), pmul(A1, pderiv(P))), pmul(A0, P))


def ansatz_matrix(V, lam, sign, s):
    """Columns L(x^0), ..., L(x^s) as coefficient lists of fixed length s+n."""
    n = (len(trim(V)) - 1) // 2
    rows = s + n
    cols = []
    for j in range(s + 1):
        col = apply_ode(V, lam, sign, [0] * j + [1])
        col = col + [Fraction(0)] * (rows - len(col))
        assert len(col) == rows, "residual degree exceeds s + n - 1"
        cols.append(col)
    return [[cols[j][i] for j in range(s + 1)] for i in range(rows)]


def det(M):
    """Fraction-exact determinant by Gaussian elimination."""
    M = [list(map(Fraction, row)) for row in M]
    n = len(M)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if M[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            M[c], M[pivot] = M[pivot], M[c]
            sign = -sign
        result *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                for k in range(c, n):
                    M[r][k] -= f * M[c][k]
    return sign * result


def interpolate(xs, ys):
    """Coefficients of the Lagrange interpolant through (xs, ys)."""
    out = []
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = pmul(basis, [-xj, 1])
                denom *= xi - xj
        out = padd(out, pscale(basis, yi / denom))
    return out


def pdivmod(a, b):
    a, b = trim(a), trim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] / b[-1]
        q[k] = c
        a = padd(a, pscale([0] * k + b, -c))
    return trim(q), a


def pgcd(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, pdivmod(a, b)[1]
    return pscale(a, 1 / a[-1]) if a else a


def minors_gcd(V, sign, s):
    """gcd over lambda of all maximal minors of the ansatz matrix."""
    n = (len(trim(V)) - 1) // 2
    samples = [Fraction(k) for k in range(s + 2)]
    mats = [ansatz_matrix(V, lam, sign, s) for lam in samples]
    g = []
    for rows in itertools.combinations(range(s + n), s + 1):
        values = [det([M[r] for r in rows]) for M in mats]
        poly = interpolate(samples, values)
        if poly:
            g = pgcd(g, poly)
    return g


def hermite(n):
    """Physicists' Hermite polynomial H_n."""
    prev, cur = [Fraction(1)], [Fraction(0), Fraction(2)]
    if n == 0:
        return prev
    for k in range(1, n):
        prev, cur = cur, padd(pmul([0, 2], cur), pscale(prev, -2 * k))
    return cur


# -- multivariate polynomials: {exponent tuple: Fraction}, lex on the tuple --

def mv_lead(f):
    return max(f)


def mv_sub_multiple(f, g, c, shift):
    out = dict(f)
    for m, v in g.items():
        k = tuple(a + b for a, b in zip(m, shift))
        w = out.get(k, 0) - c * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def mv_reduce(f, G):
    """Remainder of f on full division by G (lex order on exponent tuples)."""
    f = {m: Fraction(c) for m, c in f.items() if c}
    G = [g for g in G if g]
    rem = {}
    while f:
        m = mv_lead(f)
        for g in G:
            lm = mv_lead(g)
            if all(a >= b for a, b in zip(m, lm)):
                shift = tuple(a - b for a, b in zip(m, lm))
                f = mv_sub_multiple(f, g, f[m] / g[lm], shift)
                break
        else:
            rem[m] = f.pop(m)
    return rem


def mv_spoly(f, g):
    lf, lg = mv_lead(f), mv_lead(g)
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    a = {tuple(x + y for x, y in zip(m, tuple(p - q for p, q in zip(lcm, lf)))): c / f[lf]
         for m, c in f.items()}
    return mv_sub_multiple(a, g, 1 / g[lg], tuple(p - q for p, q in zip(lcm, lg)))
