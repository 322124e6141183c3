from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from qes_groebner.algebra import MultiPoly, VarRegistry, XPoly
from qes_groebner.ansatz import ansatz_residual, build_system
from qes_groebner.characterization import MINUS, PLUS, BranchSign, auxiliary_ode, parity_guard, quantization
from qes_groebner.errors import PreconditionError, UsageError
from qes_groebner.parsing import parse_xpoly
from qes_groebner.square import complete_square, shift_by_lambda

REG = VarRegistry.build(eigenvalue=True)
small = st.fractions(min_value=-5, max_value=5, max_denominator=3)


def _monic(coeffs):
    return XPoly(REG, [MultiPoly.constant(REG, c) for c in coeffs] + [MultiPoly.constant(REG, 1)])


@given(st.integers(1, 4).flatmap(lambda n: st.lists(small, min_size=2 * n, max_size=2 * n)))
def test_reconstruct_and_degrees(coeffs):
    V = _monic(coeffs)
    n = V.degree // 2
    sf = complete_square(V, n)
    assert sf.reconstruct() == V
    assert sf.B.degree < n and (not sf.C or sf.C.degree < n)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.lists(small, min_size=n, max_size=n), st.lists(small, min_size=n, max_size=n))))
def test_uniqueness(parts):
    """Any (x^n + B)^2 + C with small deg B, C is recovered as built."""
    B, C = parts
    n = len(B)
    W = _monic(B)
    Cp = XPoly(REG, [MultiPoly.constant(REG, c) for c in C])
    sf = complete_square(W * W + Cp, n)
    assert sf.W == W and sf.C == Cp


@given(st.lists(small, min_size=4, max_size=4), st.lists(small, min_size=0, max_size=3),
       st.sampled_from([PLUS, MINUS]), small)
def test_exponential_factor_identity(coeffs, pcoeffs, sign, lam):
    """psi'' - (V - lambda) psi = e^{+-f} L(P) for psi = P e^{+-f}."""
    V = _monic(coeffs)
    sf = complete_square(V, 2)
    sfl = shift_by_lambda(sf)
    P = _monic(pcoeffs)
    W = sf.W
    sig = sign.value
    lam_poly = XPoly.constant(REG, MultiPoly.variable(REG, "lambda"))
    lhs = (P.derivative().derivative() + W * P.derivative() * (2 * sig)
           + (W.derivative() * sig + W * W - V + lam_poly) * P)
    ode = auxiliary_ode(sfl, sign)
    assert ode.apply(P) == lhs
    # the independent list-based oracle agrees at a rational lambda
    got = ode.apply(P).substitute({"lambda": lam})
    want = oracles.apply_ode([Fraction(c) for c in coeffs] + [Fraction(1)], lam, sig,
                             [Fraction(c) for c in pcoeffs] + [Fraction(1)])
    assert [got.coefficient(k).constant_value() for k in range(len(want))] == want


def test_square_preconditions():
    with pytest.raises(PreconditionError):
        complete_square(parse_xpoly("2*x^4+1", REG), 2)
    with pytest.raises(PreconditionError):
        complete_square(parse_xpoly("x^4+1", REG), 1)


def test_parity_guard():
    assert parity_guard(parse_xpoly("x^5+x", REG)).verdict == "NotIntegrable"
    assert parity_guard(parse_xpoly("x^2", REG)).advisory == "algebraically solvable"
    g = parity_guard(parse_xpoly("x^6", REG))
    assert g.n == 3 and g.verdict is None and g.advisory is None


def test_quantization_quartic():
    reg = VarRegistry.build(eigenvalue=True, parameters=["mu"])
    V = parse_xpoly("x^4+4*x^3+2*x^2-mu*x", reg)
    sfl = shift_by_lambda(complete_square(V, 2))
    q = quantization(sfl, 3, MINUS)
    assert q.polynomial.to_text() == "mu - 12"
    assert q.parametric
    q = quantization(sfl, 1, PLUS)
    assert q.polynomial.to_text() == "-mu"


def test_quantization_unsatisfiable_is_reported():
    V = parse_xpoly("x^4+x", REG)
    q = quantization(shift_by_lambda(complete_square(V, 2)), 0, PLUS)
    assert not q.satisfiable


def test_branch_sign_parse():
    assert BranchSign.parse("plus") is PLUS and BranchSign.parse("MINUS") is MINUS
    with pytest.raises(UsageError):
        BranchSign.parse("sideways")


def test_build_system_generators_are_coefficients():
    reg = VarRegistry.build(eigenvalue=True, parameters=["mu"])
    V = parse_xpoly("x^4+4*x^3+2*x^2-mu*x", reg)
    sfl = shift_by_lambda(complete_square(V, 2))
    q = quantization(sfl, 1, MINUS)
    residual = ansatz_residual(auxiliary_ode(sfl, MINUS), 1)
    system = build_system(residual, [q], 2, 1)
    assert system.unknowns == ("p0",)
    assert "mu - 8" in [g.to_text() for g in system.generators]
