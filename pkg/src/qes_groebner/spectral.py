"""Spectral polynomials, eigenvalues and verified eigenpairs from a lex basis.

Back-substitution walks the variables from lowest to highest priority
(parameters, then lambda, then p_0 ... p_{s-1}).  Each value lives in one of
four domains:

* ``Fraction`` -- pinned rational value;
* ``MultiPoly`` -- an expression in parameters left symbolic, valid modulo the
  parameter constraints;
* ``Surd`` -- an element of Q(sqrt(c));
* an mpmath number -- certified numeric value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import univariate as up
from .algebra import EIGENVALUE, MultiPoly, format_rational
from .characterization import (INTEGRABLE, MINUS, NOT_INTEGRABLE, UNCONSTRAINED,
                               auxiliary_ode, exponent)
from .errors import PreconditionError, UsageError, VerificationError
from .groebner import buchberger_reduced, eliminate, normal_form
from .square import complete_square, shift_by_lambda
from .surd import Surd, rational_sqrt

DEFAULT_TOLERANCE = Fraction(1, 10**10)
DEFAULT_PRECISION = 50
SAMPLE_POINTS = (-2, -1, 0, 1, 2)



# -- value helpers ---------------------------------------------------------

def _is_numeric(v):
    return isinstance(v, (mpmath.mpf, mpmath.mpc))


def value_text(v, digits=30):
    if isinstance(v, Surd):
        return v.to_text()
    if isinstance(v, MultiPoly):
        return v.to_text()
    if isinstance(v, (int, Fraction)):
        return format_rational(v)
    if _is_numeric(v):
        return numeric_text(v, digits)
    raise TypeError(f"cannot render {v!r}")


def numeric_text(v, digits=30):
    re, im = mpmath.re(v), mpmath.im(v)
    scale = max(abs(re), abs(im), mpmath.mpf(1))
    if abs(im) <= scale * mpmath.mpf(10) ** (-digits):
        return mpmath.nstr(re, digits)
    if abs(re) <= scale * mpmath.mpf(10) ** (-digits):
        return f"{mpmath.nstr(im, digits)}*I"
    sign = "-" if im < 0 else "+"
    return f"{mpmath.nstr(re, digits)} {sign} {mpmath.nstr(abs(im), digits)}*I"


def _approx(v):
    if isinstance(v, Surd):
        return v.approx()
    if isinstance(v, (int, Fraction)):
        return mpmath.mpf(v.numerator) / v.denominator if isinstance(v, Fraction) else mpmath.mpf(v)
    return v


def coefficients_text(coeffs):
    """Render ``sum coeffs[k] x^k`` (coefficients in any value domain)."""
    pieces = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if _is_zero(c):
            continue
        xs = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
        text = value_text(c)
        simple = (isinstance(c, (int, Fraction))
                  or (isinstance(c, MultiPoly) and len(c.terms) == 1)
                  or (isinstance(c, Surd) and (not c.a or not c.b))
                  or (_is_numeric(c) and " " not in text))
        if not simple:
            pieces.append((False, f"({text})" + (f"*{xs}" if xs else "")))
            continue
        neg = text.startswith("-")
        mag = text[1:] if neg else text
        if not xs:
            pieces.append((neg, mag))
        elif mag == "1":
            pieces.append((neg, xs))
        else:
            pieces.append((neg, f"{mag}*{xs}"))
    if not pieces:
        return "0"
    neg, body = pieces[0]
    out = ("-" if neg else "") + body
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _is_zero(v):
    if _is_numeric(v):
        return v == 0
    return not v


# -- eigenvalues -----------------------------------------------------------

@dataclass(frozen=True)
class Eigenvalue:
    """One root of the spectral polynomial.

    ``exact`` is a Fraction or Surd when a closed form exists; ``expression``
    holds lambda as a polynomial in symbolic parameters.
    """

    exact: object = None
    approx: object = None
    residual_bound: Fraction = Fraction(0)
    multiplicity: int = 1
    expression: object = None

    @property
    def value(self):
        if self.expression is not None:
            return self.expression
        if self.exact is not None:
            return self.exact
        return self.approx

    @property
    def is_exact(self):
        return self.exact is not None or self.expression is not None

    def text(self):
        return value_text(self.value)

    def approx_text(self, digits=30):
        if self.approx is None:
            return None
        return numeric_text(self.approx, digits)


def _poly_norm(p, r):
    return sum(abs(_approx(c)) * abs(r) ** k for k, c in enumerate(p))


def roots(T, precision=DEFAULT_PRECISION, tolerance=DEFAULT_TOLERANCE, var=EIGENVALUE):
    """All roots of the univariate ``T`` with multiplicity.

    Rational roots and roots of a leftover quadratic factor are exact;
    anything else is numeric with a relative residual bound.
    """
    p = up.from_multipoly(T, var) if isinstance(T, MultiPoly) else up.trim(T)
    if up.degree(p) < 1:
        return []
    out = []
    with mpmath.workdps(precision):
        for factor, mult in up.squarefree_decomposition(p):
            rest = factor
            for r in up.rational_roots(factor, precision):
                out.append(Eigenvalue(r, _approx(r), Fraction(0), mult))
                rest = up.divmod_poly(rest, [-r, Fraction(1)])[0]
            deg = up.degree(rest)
            if deg == 1:
                r = -rest[0] / rest[1]
                out.append(Eigenvalue(r, _approx(r), Fraction(0), mult))
            elif deg == 2:
                c0, b, a = rest
                disc = b * b - 4 * a * c0
                k, m = rational_sqrt(disc)
                for sgn in (-1, 1):
                    z = Surd(-b / (2 * a), sgn * k / (2 * a), m)
                    out.append(Eigenvalue(z, z.approx(), Fraction(0), mult))
            elif deg > 2:
                out.extend(_certified_numeric(rest, mult, precision, tolerance))
        out.sort(key=lambda e: (float(mpmath.re(e.approx)), float(mpmath.im(e.approx))))
    return out


def _certified_numeric(p, mult, precision, tolerance):
    found = up.numeric_roots(p, precision)
    if len(found) != up.degree(p):
        raise VerificationError(f"found {len(found)} roots for a degree-{up.degree(p)} factor")
    bound = up.cauchy_bound(p)
    out = []
    for r in found:
        r = +r
        if abs(r) > mpmath.mpf(bound.numerator) / bound.denominator:
            raise VerificationError(f"root {r} violates the Cauchy bound {bound}")
        res = abs(up.evaluate(p, r)) / _poly_norm(p, r)
        bound_q = up.mpf_to_fraction(mpmath.mpf(res)) if res else Fraction(0)
        if bound_q > tolerance:
            raise VerificationError(f"numeric root {r} has relative residual {res}")
        out.append(Eigenvalue(None, r, bound_q, mult))
    return out


# -- extraction ------------------------------------------------------------

@dataclass
class SpectralResult:
    verdict: str
    T: object = None
    lambda_relations: tuple = ()
    param_constraints: tuple = ()
    eigenvalues: list = field(default_factory=list)
    eigenpairs: list = field(default_factory=list)
    notes: list = field(default_factory=list)


def spectral_extract(G, s=None):
    """Verdict, spectral polynomial(s) and parameter constraints of a basis."""
    if G.is_zero_ideal():
        return SpectralResult(UNCONSTRAINED, notes=["no constraints"])
    if G.is_unit():
        return SpectralResult(NOT_INTEGRABLE)
    reg = G.order.registry
    keep = set(reg.names_in("eigenvalue")) | set(reg.names_in("parameter"))
    elim = eliminate(G, keep)
    lam = [g for g in elim if EIGENVALUE in g.variables()]
    params = tuple(g for g in elim if EIGENVALUE not in g.variables())
    if not lam:
        return SpectralResult(UNCONSTRAINED, None, (), params, notes=["lambda is free"])
    return SpectralResult(INTEGRABLE, lam[0], tuple(lam), params)


# -- eigenpairs ------------------------------------------------------------

@dataclass
class Eigenpair:
    sign: object
    s: int
    n: int
    eigenvalue: Eigenvalue
    P: tuple
    params: dict
    symbolic: tuple
    constraints: tuple
    f: object
    bound_state: object = None
    residual: object = None

    def P_text(self):
        return coefficients_text(self.P)

    def exponent_text(self):
        return self.f.signed(self.sign).to_text()

    def wavefunction_text(self):
        P = self.P_text()
        if P == "1":
            return f"exp({self.exponent_text()})"
        return f"({P})*exp({self.exponent_text()})"


@dataclass
class ResidualReport:
    exact: bool
    zero: bool
    coefficients: tuple = ()
    max_relative: object = None

    def text(self):
        if self.exact:
            return coefficients_text(list(self.coefficients))
        return mpmath.nstr(self.max_relative, 5)


def _leading_var(poly, order_names):
    present = poly.variables()
    for name in order_names:
        if name in present:
            return name
    return None


def _substitute_exact(poly, values):
    """Substitute Fraction/MultiPoly values; None if a Surd/numeric value occurs."""
    subs = {}
    for name in poly.variables():
        if name in values:
            v = values[name]
            if not isinstance(v, (Fraction, MultiPoly)):
                return None
            subs[name] = v
    return poly.substitute(subs)


def _univariate_values(poly, var, values):
    """Coefficients (low to high) of ``poly`` in ``var`` with other variables evaluated."""
    parts = poly.coefficients_in(var)
    top = max(parts)
    out = []
    for k in range(top + 1):
        c = parts.get(k)
        out.append(c.evaluate(values) if c is not None else 0)
    while out and _is_zero(out[-1]):
        out.pop()
    return out


def _all_rational_roots(g):
    roots_ = up.rational_roots(g)
    rest = g
    for r in roots_:
        while True:
            q, rem = up.divmod_poly(rest, [-r, Fraction(1)])
            if rem:
                break
            rest = q
    return roots_ if up.degree(rest) == 0 else None


class _Branch:
    def __init__(self, values, symbolic):
        self.values = dict(values)
        self.symbolic = list(symbolic)
        self.eigenvalue = None

    def fork(self, name, value):
        b = _Branch(self.values, self.symbolic)
        b.eigenvalue = self.eigenvalue
        b.values[name] = value
        return b


def solve_eigenpairs(G, result, sign, n, s, sf_lambda, precision=DEFAULT_PRECISION,
                     tolerance=DEFAULT_TOLERANCE):
    """Back-substitute the reduced lex basis into verified eigenpairs.

    Fills ``result.eigenvalues``, ``result.eigenpairs`` and ``result.notes``.
    """
    reg = G.order.registry
    priority = G.order.priority
    params_low_first = [v for v in reversed(priority) if reg.block_of(v) == "parameter"]
    unknowns_low_first = [v for v in reversed(priority) if reg.block_of(v) == "ansatz"]
    by_lead = {}
    for g in G.elements:
        by_lead.setdefault(_leading_var(g, priority), []).append(g)

    branches = [_Branch({}, [])]
    for v in params_low_first:
        nxt = []
        for br in branches:
            nxt.extend(_solve_param(v, by_lead.get(v, []), br))
        branches = nxt

    final = []
    with mpmath.workdps(precision):
        for br in branches:
            final.extend(_solve_lambda(by_lead.get(EIGENVALUE, []), br, result, precision, tolerance))
        for v in unknowns_low_first:
            nxt = []
            for br in final:
                nxt.extend(_solve_unknown(v, by_lead.get(v, []), br, result))
            final = nxt

    seen_values = []
    for br in final:
        if br.eigenvalue is not None and br.eigenvalue not in seen_values:
            seen_values.append(br.eigenvalue)
    result.eigenvalues = seen_values

    base = sf_lambda.registry
    f = exponent(sf_lambda)
    constraint_polys = [c for c in result.param_constraints]
    for br in final:
        pinned = {k: v for k, v in br.values.items() if reg.block_of(k) == "parameter"}
        coeffs = [br.values[f"p{j}"] for j in range(s)] + [Fraction(1)]
        coeffs = [_to_base(c, base) for c in coeffs]
        pinned_base = {k: v for k, v in pinned.items()}
        constraints = _remaining_constraints(constraint_polys, pinned, base)
        f_pinned = f.f.substitute(pinned_base)
        pair = Eigenpair(
            sign=sign, s=s, n=n, eigenvalue=br.eigenvalue, P=tuple(coeffs),
            params=pinned, symbolic=tuple(br.symbolic), constraints=tuple(constraints),
            f=type(f)(f_pinned))
        pair.bound_state = classify_state(pair)
        result.eigenpairs.append(pair)
    return result


def _to_base(v, base):
    if isinstance(v, MultiPoly):
        return v.embed(base)
    return v


def _remaining_constraints(polys, pinned, base):
    out = []
    for p in polys:
        q = p.substitute(pinned)
        if q:
            out.append(q.embed(base))
    if not out:
        return []
    if any(q.is_constant() for q in out):
        raise PreconditionError("pinned parameters violate the parameter constraints")
    return list(buchberger_reduced(out).elements)


def _solve_param(v, polys, br):
    """Pin ``v`` to each rational root, or keep it symbolic."""
    if not polys:
        br.symbolic.append(v)
        return [br]
    subs = [_substitute_exact(p, br.values) for p in polys]
    if any(q is not None and q.variables() - {v} for q in subs):
        br.symbolic.append(v)
        return [br]
    g = []
    for q in subs:
        g = up.gcd(g, up.from_multipoly(q, v))
    if up.degree(g) < 1:
        return []
    rr = _all_rational_roots(g)
    if rr is None:
        br.symbolic.append(v)
        return [br]
    return [br.fork(v, r) for r in rr]


def _solve_lambda(polys, br, result, precision, tolerance):
    if not polys:
        result.notes.append("lambda is not determined by the basis")
        return []
    subs = [_substitute_exact(p, br.values) for p in polys]
    if all(q is not None and q.variables() <= {EIGENVALUE} for q in subs):
        g = []
        for q in subs:
            g = up.gcd(g, up.from_multipoly(q, EIGENVALUE))
        out = []
        for ev in roots(g, precision, tolerance):
            value = ev.exact if ev.exact is not None else ev.approx
            nb = br.fork(EIGENVALUE, value)
            nb.eigenvalue = ev
            out.append(nb)
        return out
    for q in subs:
        if q is None:
            continue
        parts = q.coefficients_in(EIGENVALUE)
        if set(parts) == {0, 1} or set(parts) == {1}:
            lead = parts[1]
            if lead.is_constant():
                expr = -parts.get(0, MultiPoly.zero(q.registry)) / lead.constant_value()
                nb = br.fork(EIGENVALUE, expr)
                nb.eigenvalue = Eigenvalue(expression=expr)
                return [nb]
    result.notes.append("lambda has no closed form over the symbolic parameters")
    return []


def _solve_unknown(v, polys, br, result):
    if not polys:
        result.notes.append(f"{v} is not determined by the basis")
        return []
    subs = [_substitute_exact(p, br.values) for p in polys]
    if all(q is not None for q in subs):
        return _solve_unknown_exact(v, subs, br, result)
    best = None
    for p in polys:
        try:
            coeffs = _univariate_values(p, v, br.values)
        except UsageError:
            result.notes.append(f"{v} depends on parameters left symbolic")
            return []
        if len(coeffs) == 2:
            mag = abs(_approx(coeffs[1]))
            if best is None or mag > best[0]:
                best = (mag, coeffs)
        elif len(coeffs) > 2:
            continue
    if best is None:
        result.notes.append(f"{v} is not linear after substitution")
        return []
    c0, c1 = best[1]
    return [br.fork(v, -c0 / c1 if not isinstance(c1, Fraction) else -c0 * (1 / c1))]


def _solve_unknown_exact(v, subs, br, result):
    symbolic = [q for q in subs if q.variables() - {v}]
    if not symbolic:
        g = []
        for q in subs:
            g = up.gcd(g, up.from_multipoly(q, v))
        if up.degree(g) < 1:
            return []
        if up.degree(g) == 1:
            return [br.fork(v, -g[0] / g[1])]
        out = []
        for ev in roots(g):
            if up.degree(g) > 2 or ev.exact is None:
                result.notes.append(f"{v} has a non-quadratic minimal polynomial")
                return []
            out.append(br.fork(v, ev.exact))
        return out
    for q in subs:
        parts = q.coefficients_in(v)
        if set(parts) <= {0, 1} and 1 in parts and parts[1].is_constant():
            return [br.fork(v, -parts.get(0, MultiPoly.zero(q.registry)) / parts[1].constant_value())]
    result.notes.append(f"{v} has no closed form over the symbolic parameters")
    return []


def back_substitute(G, assignment):
    """Solve the triangular basis for p_0 .. p_{s-1} given lambda and parameters.

    ``assignment`` maps lambda and every parameter to a Fraction, Surd or
    mpmath number.  Returns the list of coefficient tuples (low to high, monic)
    of every solution; there is more than one only when a basis element is
    quadratic in its leading unknown after substitution.
    """
    reg = G.order.registry
    missing = [v for v in reg.names if reg.block_of(v) != "ansatz" and v not in assignment]
    if missing:
        raise UsageError(f"assignment lacks {', '.join(missing)}")
    _check_assignment(G, assignment)
    unknowns = [v for v in reversed(G.order.priority) if reg.block_of(v) == "ansatz"]
    by_lead = {}
    for g in G.elements:
        by_lead.setdefault(_leading_var(g, G.order.priority), []).append(g)
    scratch = SpectralResult(INTEGRABLE)
    branches = [_Branch(assignment, [])]
    for v in unknowns:
        nxt = []
        for br in branches:
            nxt.extend(_solve_unknown(v, by_lead.get(v, []), br, scratch))
        branches = nxt
    if not branches:
        raise PreconditionError("; ".join(scratch.notes) or "assignment admits no ansatz solution")
    s = len(unknowns)
    return [tuple(br.values[f"p{j}"] for j in range(s)) + (Fraction(1),) for br in branches]


def _mpf(q):
    return mpmath.mpf(q.numerator) / q.denominator


def _term_scale(g, values):
    """Sum of absolute term values of ``g`` at ``values``."""
    names = g.registry.names
    total = mpmath.mpf(0)
    for m, c in g.terms.items():
        term = abs(_approx(c))
        for i, e in enumerate(m):
            if e:
                term *= abs(_approx(values[names[i]])) ** e
        total += term
    return total


def _check_assignment(G, assignment):
    reg = G.order.registry
    for g in G.elements:
        if any(reg.block_of(v) == "ansatz" for v in g.variables()):
            continue
        value = g.evaluate(assignment)
        if isinstance(value, (int, Fraction, Surd)):
            if value:
                raise PreconditionError(f"assignment violates {g.to_text()}")
            continue
        if abs(value) > max(_term_scale(g, assignment), 1) * _mpf(DEFAULT_TOLERANCE):
            raise PreconditionError(f"assignment violates {g.to_text()} (value {value})")


# -- verification and classification ---------------------------------------

def verify_eigenpair(V, pair, tolerance=DEFAULT_TOLERANCE):
    """Residual ``P'' + A1 P' + A0 P`` of ``pair`` against the potential ``V``.

    ``V`` is taken with the pair's pinned parameters still symbolic; they are
    substituted here, so the check does not reuse the pipeline's ODE.
    """
    reg = V.registry
    if EIGENVALUE not in reg:
        raise UsageError("potential registry must include lambda")
    pinned = {k: v for k, v in pair.params.items() if k in reg}
    Vp = V.substitute(pinned)
    sf = shift_by_lambda(complete_square(Vp, pair.n))
    ode = auxiliary_ode(sf, pair.sign)
    lam = pair.eigenvalue.value
    values = [_to_base(c, reg) for c in pair.P]
    if all(isinstance(c, (Fraction, MultiPoly)) for c in values) and isinstance(lam, (Fraction, MultiPoly)):
        lam = _to_base(lam, reg)
        A1 = [c.substitute({EIGENVALUE: lam}) for c in ode.A1.coeffs]
        A0 = [c.substitute({EIGENVALUE: lam}) for c in ode.A0.coeffs]
        P = [c if isinstance(c, MultiPoly) else MultiPoly.constant(reg, c) for c in values]
        R = _residual(P, A1, A0, MultiPoly.zero(reg))
        constraints = [c.embed(reg) for c in pair.constraints]
        if constraints:
            R = [normal_form(c, constraints) for c in R]
        return ResidualReport(True, all(not c for c in R), tuple(R))
    if all(isinstance(c, (Fraction, Surd)) for c in values) and isinstance(lam, (Fraction, Surd)):
        A1 = [c.evaluate({EIGENVALUE: lam}) for c in ode.A1.coeffs]
        A0 = [c.evaluate({EIGENVALUE: lam}) for c in ode.A0.coeffs]
        R = _residual(list(values), A1, A0, Fraction(0))
        return ResidualReport(True, all(not c for c in R), tuple(R))
    lam_n = _approx(lam)
    A1 = [_approx(c.evaluate({EIGENVALUE: lam_n})) for c in ode.A1.coeffs]
    A0 = [_approx(c.evaluate({EIGENVALUE: lam_n})) for c in ode.A0.coeffs]
    P = [_approx(c) for c in values]
    dP = [c * k for k, c in enumerate(P)][1:]
    ddP = [c * k for k, c in enumerate(dP)][1:]
    worst = mpmath.mpf(0)
    for x0 in SAMPLE_POINTS:
        val = _ev(ddP, x0) + _ev(A1, x0) * _ev(dP, x0) + _ev(A0, x0) * _ev(P, x0)
        ax = abs(x0)
        scale = _ev_abs(ddP, ax) + _ev_abs(A1, ax) * _ev_abs(dP, ax) + _ev_abs(A0, ax) * _ev_abs(P, ax)
        rel = abs(val) / max(scale, mpmath.mpf(1))
        worst = max(worst, rel)
    return ResidualReport(False, worst <= _mpf(tolerance), (), worst)


def _ev(coeffs, x0):
    acc = mpmath.mpf(0)
    for c in reversed(coeffs):
        acc = acc * x0 + c
    return acc


def _ev_abs(coeffs, ax):
    acc = mpmath.mpf(0)
    for c in reversed(coeffs):
        acc = acc * ax + abs(c)
    return acc


def _residual(P, A1, A0, zero):
    def d(cs):
        return [c * k for k, c in enumerate(cs)][1:]

    def mul(a, b):
        if not a or not b:
            return []
        out = [zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return out

    def add(a, b):
        n = max(len(a), len(b))
        return [(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero) for i in range(n)]

    R = add(add(d(d(P)), mul(A1, d(P))), mul(A0, P))
    while R and _is_zero(R[-1]):
        R.pop()
    return R


def require_verified(V, pair, tolerance=DEFAULT_TOLERANCE):
    report = verify_eigenpair(V, pair, tolerance)
    if not report.zero:
        raise VerificationError(
            f"eigenpair lambda={pair.eigenvalue.text()}, P={pair.P_text()} has residual {report.text()}")
    pair.residual = report
    return report


def classify_state(pair):
    """True when ``P exp(-f)`` is square integrable; None if undecidable.

    Only the minus branch decays, and only when the leading power n+1 of f
    is even.  Non-real parameter values in f make the call indeterminate.
    """
    for name in pair.f.f.variables():
        v = pair.params.get(name)
        if isinstance(v, Surd) and not v.is_real():
            return None
        if _is_numeric(v) and mpmath.im(v) != 0:
            return None
    return pair.sign is MINUS and pair.n % 2 == 1
