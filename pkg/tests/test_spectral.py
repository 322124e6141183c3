import dataclasses
from fractions import Fraction

import mpmath
import pytest

from cases import DODECATIC, OCTIC, OSCILLATOR, QUARTIC, SEXTIC2, run
from qes_groebner import univariate as uv
from qes_groebner.algebra import VarRegistry
from qes_groebner.characterization import MINUS, PLUS
from qes_groebner.errors import PreconditionError, UsageError
from qes_groebner.groebner import MonomialOrder, buchberger_reduced
from qes_groebner.parsing import parse_poly
from qes_groebner.spectral import (DEFAULT_TOLERANCE, back_substitute, classify_state, roots,
                                   spectral_extract, verify_eigenpair)
from qes_groebner.surd import Surd


def _product(*factors):
    p = [Fraction(1)]
    for f in factors:
        p = uv.mul(p, [Fraction(c) for c in f])
    return p


def test_roots_rational_with_multiplicity_and_surd_pair():
    found = roots(_product([-1, 1], [-1, 1], [-2, 0, 1]))
    assert [(e.exact, e.multiplicity) for e in found] == [
        (Surd(0, -1, 2), 1), (Fraction(1), 2), (Surd(0, 1, 2), 1)]
    assert all(e.residual_bound == 0 for e in found)


def test_roots_numeric_are_certified():
    # irreducible cubic times a rational root: only the cubic goes numeric
    found = roots(_product([-1, -1, 0, 1], [3, 1]))
    assert [e.exact for e in found if e.exact is not None] == [Fraction(-3)]
    numeric = [e for e in found if e.exact is None]
    assert len(numeric) == 3
    for e in numeric:
        assert e.residual_bound <= DEFAULT_TOLERANCE
        with mpmath.workdps(50):
            assert abs(e.approx ** 3 - e.approx - 1) < mpmath.mpf(10) ** -40
    reals = [e.approx for e in found]
    assert [float(mpmath.re(r)) for r in reals] == sorted(float(mpmath.re(r)) for r in reals)


def test_roots_of_constant_is_empty():
    assert roots([Fraction(3)]) == []


def test_spectral_extract_verdicts():
    reg = VarRegistry.build(ansatz=["p0"], eigenvalue=True, parameters=["mu"])
    order = MonomialOrder.block_lex(reg)
    assert spectral_extract(buchberger_reduced([], order)).verdict == "Unconstrained"
    one = buchberger_reduced([parse_poly("1", reg)], order)
    assert spectral_extract(one).verdict == "NotIntegrable"
    free = buchberger_reduced([parse_poly("p0 - mu", reg)], order)
    assert spectral_extract(free).verdict == "Unconstrained"
    G = buchberger_reduced([parse_poly("p0 - lambda", reg), parse_poly("lambda^2 - mu", reg),
                            parse_poly("mu - 4", reg)], order)
    res = spectral_extract(G)
    assert res.verdict == "Integrable"
    assert res.T.to_text() == "lambda^2 - 4"
    assert [g.to_text() for g in res.param_constraints] == ["mu - 4"]


def test_back_substitute_surd():
    res, _, _ = run(SEXTIC2, MINUS, 3, J=2)
    [P] = back_substitute(res.basis, {"lambda": Surd(0, 2, 6)})
    assert P == (0, Surd(0, Fraction(-1, 2), 6), 0, 1)


def test_back_substitute_numeric():
    res, _, _ = run(QUARTIC, MINUS, 5, mu=16)
    complex_roots = [e for e in res.spectral.eigenvalues if e.exact is None]
    assert complex_roots
    lam = complex_roots[0].approx
    with mpmath.workdps(50):
        [P] = back_substitute(res.basis, {"lambda": lam})
    match = [p for p in res.spectral.eigenpairs if p.eigenvalue.approx == lam]
    assert match and all(abs(mpmath.mpmathify(a - b)) < mpmath.mpf(10) ** -30 for a, b in zip(P, match[0].P))


def test_back_substitute_rejects_bad_assignment():
    res, _, _ = run(SEXTIC2, MINUS, 3, J=2)
    with pytest.raises(UsageError):
        back_substitute(res.basis, {})
    with pytest.raises(PreconditionError):
        back_substitute(res.basis, {"lambda": Fraction(1)})


def test_classify_state():
    res, _, _ = run(OSCILLATOR, MINUS, 2)
    assert classify_state(res.spectral.eigenpairs[0]) is True
    res, _, _ = run(OCTIC, MINUS, 1)
    assert classify_state(res.spectral.eigenpairs[0]) is False   # n = 4 even: exp(-x^5/5) blows up
    res, _, _ = run(OCTIC, PLUS, 1)
    assert classify_state(res.spectral.eigenpairs[0]) is False
    res, _, _ = run(DODECATIC, MINUS, 0)
    pair = res.spectral.eigenpairs[0]
    pinned = dataclasses.replace(pair, params={**pair.params, "kappa": Surd(0, 1, -1)})
    assert classify_state(pinned) is None


def test_verify_eigenpair_symbolic_lambda():
    res, _, V = run(DODECATIC, PLUS, 0)
    [pair] = res.spectral.eigenpairs
    assert pair.symbolic == ("kappa",)
    report = verify_eigenpair(V, pair)
    assert report.exact and report.zero
    wrong = dataclasses.replace(pair, P=(Fraction(2),))
    assert verify_eigenpair(V, wrong).zero   # scaling P keeps it a solution
    shifted = dataclasses.replace(pair, eigenvalue=dataclasses.replace(pair.eigenvalue, expression=None,
                                                                       exact=Fraction(1)))
    assert not verify_eigenpair(V, shifted).zero


def test_wavefunction_text():
    res, _, _ = run(OSCILLATOR, MINUS, 0)
    assert res.spectral.eigenpairs[0].wavefunction_text() == "exp(-1/2*x^2)"
    res, _, _ = run(OSCILLATOR, MINUS, 1)
    assert res.spectral.eigenpairs[0].wavefunction_text() == "(x)*exp(-1/2*x^2)"
