"""Monic ansatz substitution and collection of the polynomial system."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .algebra import MultiPoly, XPoly
from .errors import InternalError, UsageError
from .groebner import normal_form

UNKNOWN_RE = re.compile(r"p\d+\Z")


def unknown_names(s):
    """Ansatz coefficient names, highest power first: p_{s-1}, ..., p_0."""
    return [f"p{j}" for j in range(s - 1, -1, -1)]


@dataclass(frozen=True)
class AnsatzSystem:
    s: int
    unknowns: tuple
    generators: tuple
    registry: object
    residual: XPoly


def ansatz_polynomial(registry, s):
    """``x^s + p_{s-1} x^{s-1} + ... + p_0`` over ``registry``."""
    coeffs = [MultiPoly.variable(registry, f"p{j}") for j in range(s)]
    return XPoly(registry, coeffs + [MultiPoly.constant(registry, 1)])


def ansatz_residual(ode, s):
    """Expanded ``P'' + A1 P' + A0 P`` for the monic degree-s ansatz."""
    if s < 0:
        raise UsageError("s must be non-negative")
    base = ode.A1.registry
    for name in base.names:
        if UNKNOWN_RE.match(name):
            raise UsageError(f"parameter name {name!r} is reserved for ansatz unknowns")
    registry = base.with_ansatz(unknown_names(s))
    P = ansatz_polynomial(registry, s)
    A1 = ode.A1.embed(registry)
    A0 = ode.A0.embed(registry)
    return P.derivative().derivative() + A1 * P.derivative() + A0 * P


def build_system(residual, constraints, n, s):
    """Nonzero x-coefficients of the residual plus parametric constraints.

    The x^(s+n-1) coefficient must vanish modulo the quantization
    constraint; it is then redundant and dropped.
    """
    reg = residual.registry
    unknowns = tuple(reg.names_in("ansatz"))
    top = residual.coefficient(s + n - 1)
    extra = []
    for q in constraints:
        poly = q.polynomial.embed(reg)
        if poly.is_constant():
            if poly:
                raise UsageError("unsatisfiable quantization constraint passed to build_system")
            continue
        extra.append(poly)
    if top:
        if not extra or normal_form(top, extra):
            raise InternalError(
                f"x^{s + n - 1} coefficient {top} does not cancel under the quantization constraint")
    if residual.degree > s + n - 1:
        raise InternalError("residual degree exceeds s + n - 1")
    gens = [c for k, c in reversed(list(enumerate(residual.coeffs))) if c and k != s + n - 1]
    return AnsatzSystem(s, unknowns, tuple(gens + extra), reg, residual)
