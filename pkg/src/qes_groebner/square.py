"""Completing the square for monic even-degree polynomials in x."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import EIGENVALUE, MultiPoly, XPoly
from .errors import PreconditionError, UsageError


@dataclass(frozen=True)
class SquareForm:
    """``V = (x^n + B)^2 + C`` with ``deg B < n`` and ``deg C < n``."""

    n: int
    B: XPoly
    C: XPoly

    @property
    def registry(self):
        return self.B.registry

    @property
    def W(self):
        return XPoly.x(self.registry, self.n) + self.B

    def b(self, i):
        return self.B.coefficient(i)

    def c(self, i):
        return self.C.coefficient(i)

    def reconstruct(self):
        return self.W * self.W + self.C


def complete_square(V, n):
    """Unique decomposition of the monic degree-2n polynomial ``V``.

    The b_i are solved top-down from the coefficient of x^(n+i); each step
    only halves a coefficient, so no parameter ever lands in a denominator.
    """
    if n < 1:
        raise PreconditionError("completing the square needs n >= 1")
    if V.degree != 2 * n:
        raise PreconditionError(f"expected degree {2 * n}, got {V.degree}")
    if V.leading() != 1:
        raise PreconditionError(f"potential is not monic (leading coefficient {V.leading()})")
    reg = V.registry
    W = XPoly.x(reg, n)
    for i in range(n - 1, -1, -1):
        gap = (V - W * W).coefficient(n + i)
        if gap:
            W = W + XPoly(reg, [MultiPoly.zero(reg)] * i + [gap * Fraction(1, 2)])
    C = V - W * W
    if C.degree >= n:
        raise PreconditionError("square completion left a remainder of degree >= n")
    return SquareForm(n, W - XPoly.x(reg, n), C)


def shift_by_lambda(sf):
    """Square form of ``V - lambda``: same B, constant of C lowered by lambda."""
    reg = sf.registry
    if EIGENVALUE not in reg:
        raise UsageError("lambda is not registered")
    lam = MultiPoly.variable(reg, EIGENVALUE)
    return SquareForm(sf.n, sf.B, sf.C - lam)
