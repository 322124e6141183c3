from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qes_groebner.algebra import MultiPoly, VarRegistry, XPoly, content_normalize
from qes_groebner.errors import UsageError
from qes_groebner.parsing import parse_poly, parse_xpoly

REG = VarRegistry.build(ansatz=["p0", "p1"], eigenvalue=True, parameters=["mu"])

coeff = st.fractions(min_value=-7, max_value=7, max_denominator=5)
mono = st.tuples(*[st.integers(0, 2)] * len(REG))
polys = st.dictionaries(mono, coeff, max_size=5).map(lambda t: MultiPoly(REG, t))
xpolys = st.lists(polys, max_size=4).map(lambda cs: XPoly(REG, cs))


@given(polys, polys, polys)
def test_ring_laws(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == MultiPoly.zero(REG)


@given(polys, polys, st.sampled_from(REG.names))
def test_product_rule(f, g, name):
    assert (f * g).derivative(name) == f.derivative(name) * g + f * g.derivative(name)


@given(xpolys, xpolys)
def test_x_product_rule(P, Q):
    assert (P * Q).derivative() == P.derivative() * Q + P * Q.derivative()
    assert P.antiderivative().derivative() == P


@settings(max_examples=50)
@given(polys, st.fractions(min_value=-3, max_value=3, max_denominator=4))
def test_substitute_matches_evaluate(f, v):
    values = {name: v for name in REG.names}
    assert f.substitute(values).constant_value() == f.evaluate(values)


@given(polys)
def test_text_round_trip(f):
    assert parse_poly(f.to_text(), REG) == f


@given(xpolys)
def test_xpoly_text_round_trip(P):
    assert parse_xpoly(P.to_text(), REG) == P


def test_embed_preserves_value():
    small = VarRegistry.build(eigenvalue=True)
    f = parse_poly("lambda^2 - 3", small)
    assert f.embed(REG) == parse_poly("lambda^2-3", REG)
    with pytest.raises(UsageError):
        parse_poly("mu", REG).embed(small)


def test_registry_mismatch_rejected():
    other = VarRegistry.build(eigenvalue=True, parameters=["nu"])
    with pytest.raises(UsageError):
        MultiPoly.variable(REG, "mu") + MultiPoly.variable(other, "nu")


def test_registry_block_order_enforced():
    with pytest.raises(UsageError):
        VarRegistry(("lambda", "p0"), ("eigenvalue", "ansatz"))
    with pytest.raises(UsageError):
        VarRegistry(("x",), ("parameter",))


def test_content_normalize_is_scale_free():
    f = parse_poly("6*lambda^2 - 4*mu", REG)
    assert content_normalize(f) == content_normalize(f * Fraction(-5, 3))
    assert content_normalize(f) == parse_poly("3*lambda^2 - 2*mu", REG)


def test_text_is_canonical():
    assert parse_poly("mu - lambda^2 + 2*lambda*mu", REG).to_text() == "-lambda^2 + 2*lambda*mu + mu"
