"""Quantization condition, auxiliary ODEs and the eigenfunction exponent.

Substituting ``psi = P * exp(+f)`` with ``f' = W = x^n + B`` into
``psi'' = (V - lambda) psi`` leaves ``P'' + 2W P' + (W' - C) P = 0``;
``psi = P * exp(-f)`` leaves ``P'' - 2W P' - (W' + C) P = 0``.  Matching
the x^(s+n-1) coefficient for a monic P of degree s gives the
quantization condition of each branch.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .algebra import XPoly
from .errors import PreconditionError, UsageError


class BranchSign(enum.Enum):
    PLUS = 1
    MINUS = -1

    @property
    def label(self):
        return self.name.lower()

    @classmethod
    def parse(cls, text):
        try:
            return cls[text.upper()]
        except KeyError:
            raise UsageError(f"sign must be 'plus' or 'minus', got {text!r}") from None


PLUS = BranchSign.PLUS
MINUS = BranchSign.MINUS

NOT_INTEGRABLE = "NotIntegrable"
INTEGRABLE = "Integrable"
UNCONSTRAINED = "Unconstrained"

SOLVABLE_ADVISORY = "algebraically solvable"


@dataclass(frozen=True)
class GuardResult:
    n: int | None
    verdict: str | None = None
    advisory: str | None = None
    reason: str = ""


def parity_guard(V):
    """Half-degree of ``V``, or the NotIntegrable verdict for odd degree."""
    if not isinstance(V, XPoly):
        raise TypeError("parity_guard expects an XPoly")
    deg = V.degree if V else 0
    if deg % 2:
        return GuardResult(None, NOT_INTEGRABLE, None,
                           f"odd degree {deg}: Galois group SL(2,C) for every lambda")
    n = deg // 2
    advisory = SOLVABLE_ADVISORY if deg in (0, 2) else None
    return GuardResult(n, None, advisory)


@dataclass(frozen=True)
class QuantizationConstraint:
    """``sign * c_{n-1} - n - 2s``, which must vanish."""

    sign: BranchSign
    s: int
    polynomial: object

    @property
    def satisfiable(self):
        p = self.polynomial
        return not (p.is_constant() and p)

    @property
    def parametric(self):
        return not self.polynomial.is_constant()


def quantization(sf_lambda, s, sign):
    if s < 0:
        raise PreconditionError("s must be non-negative")
    n = sf_lambda.n
    poly = sf_lambda.c(n - 1) * sign.value - (n + 2 * s)
    return QuantizationConstraint(sign, s, poly)


@dataclass(frozen=True)
class AuxiliaryODE:
    """``P'' + A1 P' + A0 P = 0``."""

    sign: BranchSign
    A1: XPoly
    A0: XPoly
    n: int

    def apply(self, P):
        return P.derivative().derivative() + self.A1 * P.derivative() + self.A0 * P


def auxiliary_ode(sf_lambda, sign):
    W = sf_lambda.W
    dW = W.derivative()
    if sign is PLUS:
        return AuxiliaryODE(sign, W * 2, dW - sf_lambda.C, sf_lambda.n)
    return AuxiliaryODE(sign, W * -2, -(dW + sf_lambda.C), sf_lambda.n)


@dataclass(frozen=True)
class ExponentData:
    """``f = x^(n+1)/(n+1) + sum b_k x^(k+1)/(k+1)``."""

    f: XPoly

    def signed(self, sign):
        return self.f if sign is PLUS else -self.f


def exponent(sf):
    return ExponentData(sf.W.antiderivative())
