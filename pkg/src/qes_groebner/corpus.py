"""Built-in reference corpus: the six potential families and their tables.

Every row stores the published value.  Where the published value is a
misprint that is certain (independently confirmed by substitution or by the
published Groebner basis) the row also stores the corrected expectation and
reports an informational flag instead of a failure.  All other mismatches
fail with both values shown.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .algebra import MultiPoly, XPoly
from .characterization import MINUS, NOT_INTEGRABLE, PLUS
from .errors import UsageError
from .parsing import collect_names, parse_poly, parse_xpoly
from .pipeline import ProblemSpec, run_case
from .spectral import value_text
from .surd import Surd

POTENTIALS = {
    "quartic": "x^4+4*x^3+2*x^2-mu*x",
    "sextic1": "x^6-(4*J-1)*x^2",
    "sextic2": "x^6-(4*J+1)*x^2",
    "octic": "(x^4+delta+2)^2+mu*x^3",
    "decatic": "x^10-x^8+x^6+delta*x^4+epsilon*x^2",
    "dodecatic": "x^12+kappa*x^6+mu*x^5",
    "tetrakaidecatic": "(x^7+delta+2)^2+mu*x^6+kappa*x^2",
}

PASS, FLAG, FAIL = "pass", "flag", "fail"


@dataclass
class RowResult:
    table: str
    row: str
    status: str
    expected: str
    actual: str
    note: str = ""

    def line(self):
        text = f"{self.table:8s} {self.row:18s} {self.status.upper():4s}  {self.actual}"
        if self.status != PASS:
            text += f"  (published: {self.expected})"
        if self.note:
            text += f"  [{self.note}]"
        return text


@dataclass
class CorpusReport:
    rows: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.status != FAIL for r in self.rows)

    def counts(self):
        out = {PASS: 0, FLAG: 0, FAIL: 0}
        for r in self.rows:
            out[r.status] += 1
        return out

    def text(self):
        lines = [r.line() for r in self.rows]
        c = self.counts()
        lines.append(f"{c[PASS]} passed, {c[FLAG]} flagged, {c[FAIL]} failed")
        return "\n".join(lines) + "\n"


class _Cases:
    """Memoized case runs keyed by (family, bindings, sign, s)."""

    def __init__(self):
        self._cache = {}

    def get(self, family, sign, s, **bindings):
        key = (family, tuple(sorted(bindings.items())), sign, s)
        if key not in self._cache:
            params = {}
            text = POTENTIALS[family]
            spec = ProblemSpec(text, params)
            for name in collect_names(text):
                params[name] = bindings.get(name)
            V = spec.potential_poly()
            n = V.degree // 2
            self._cache[key] = run_case(V, n, sign, s)
        return self._cache[key]


def _same_poly(expected_text, actual):
    """Equality after content normalization (scale-free)."""
    if actual is None:
        return False
    exp = parse_poly(expected_text, actual.registry)
    if not exp or not actual:
        return not exp and not actual
    return exp.primitive() == actual.primitive()


def _row(table, row, expected, actual, ok, corrected=None, note=""):
    if ok:
        return RowResult(table, row, FLAG if corrected else PASS, expected, actual, note)
    return RowResult(table, row, FAIL, expected, actual, note)


# -- spectral polynomial tables ---------------------------------------------

_TABLE1 = {  # quartic plus branch, mu = 2 - 2s
    0: "lambda-1",
    1: "lambda^2+10*lambda+17",
    2: "lambda^3+21*lambda^2+115*lambda+135",
    3: "lambda^4+36*lambda^3+406*lambda^2+1572*lambda+1521",
    4: "lambda^5+55*lambda^4+1050*lambda^3+8366*lambda^2+26613*lambda+27659",
    5: "lambda^6+78*lambda^5+2255*lambda^4+30276*lambda^3+196015*lambda^2+596046*lambda+777825",
}
_TABLE2 = {  # quartic minus branch, mu = 6 + 2s
    0: "lambda-1",
    1: "lambda^2-6*lambda+1",
    2: "lambda^3-15*lambda^2+43*lambda+51",
    3: "lambda^4-28*lambda^3+214*lambda^2-156*lambda-1615",
    4: "lambda^5-45*lambda^4+650*lambda^3-2634*lambda^2-8027*lambda+41799",
    5: "lambda^6-66*lambda^5+1535*lambda^4-13404*lambda^3+3343*lambda^2+428670*lambda-984879",
}
_TABLE5 = {  # sextic case 1, J = (s+2)/2
    0: "lambda",
    2: "lambda^2-8",
    4: "lambda^3-64*lambda",
    6: "lambda^4-240*lambda^2+880",
    8: "lambda^5-640*lambda^3+47104*lambda",
    10: "lambda^6-1400*lambda^4+331456*lambda^2+5184000",
}
_TABLE7 = {  # sextic case 2, J = (s+1)/2
    1: "lambda",
    3: "lambda^2-24",
    5: "lambda^3-128*lambda",
    7: "lambda^4-400*lambda^2+12096",
    9: "lambda^5-960*lambda^3+129024*lambda",
}

# (table, s) -> (corrected expectation, reason)
CORRECTIONS = {
    ("table1", 0): ("lambda+3", "misprint: substituting P=1 into the plus-branch equation gives lambda + 3"),
    ("table5", 6): ("lambda^4-240*lambda^2+2880",
                    "misprint: the published Groebner basis for P_6 contains 2880 - 240 lambda^2 + lambda^4"),
}

# (table, row) -> explanation printed next to a failure that has been analysed
ANALYSED_FAILURES = {
    ("table5", 10): "determinant oracle and Groebner basis agree on constant term -5184000",
    ("table15", "minus s=4"): "x^4 + kappa/8 solves the minus equation when kappa^2 = 96, delta = -2, mu = -15",
    ("table15", "plus s=4"): "x^4 - kappa/8 solves the plus equation when kappa^2 = -96, delta = -2, mu = 15",
}


def _spectral_rows(table, family, sign, rows, binding):
    out = []
    for s, published in rows.items():
        res = _CASES.get(family, sign, s, **binding(s))
        basis = res.spectral
        actual = basis.T if basis is not None else None
        corrected, reason = CORRECTIONS.get((table, s), (None, ""))
        expected = corrected or published
        ok = _same_poly(expected, actual)
        note = reason if corrected else ANALYSED_FAILURES.get((table, s), "")
        out.append(_row(table, f"s={s}", published, actual.to_text() if actual else "-",
                        ok, corrected, note))
    return out


def _quartic_mu(sign):
    if sign is PLUS:
        return lambda s: {"mu": Fraction(2 - 2 * s)}
    return lambda s: {"mu": Fraction(6 + 2 * s)}


def table1():
    return _spectral_rows("table1", "quartic", PLUS, _TABLE1, _quartic_mu(PLUS))


def table2():
    return _spectral_rows("table2", "quartic", MINUS, _TABLE2, _quartic_mu(MINUS))


def _sextic1_J(s):
    return {"J": Fraction(s + 2, 2)}


def _sextic2_J(s):
    return {"J": Fraction(s + 1, 2)}


def table5():
    return _spectral_rows("table5", "sextic1", MINUS, _TABLE5, _sextic1_J)


def table7():
    return _spectral_rows("table7", "sextic2", MINUS, _TABLE7, _sextic2_J)


# -- spectra ----------------------------------------------------------------

def _cardano(shift):
    """The three published closed forms for the s=2 spectrum, evaluated numerically."""
    with mpmath.workdps(60):
        w = mpmath.cbrt(-9 + 1j * mpmath.sqrt(1455))
        w3 = mpmath.cbrt(3 * (-9 + 1j * mpmath.sqrt(1455)))
        k = mpmath.mpf(3) ** (mpmath.mpf(2) / 3)
        i3 = 1j * mpmath.sqrt(3)
        return [
            2 * w / k + 16 / w3 + shift,
            -(1 + i3) * w / k - 8 * (1 - i3) / w3 + shift,
            -(1 - i3) * w / k - 8 * (1 + i3) / w3 + shift,
        ]


def _spectrum_rows(table, sign, published):
    out = []
    binding = _quartic_mu(sign)
    for s, (expected_values, expected_text) in published.items():
        res = _CASES.get("quartic", sign, s, **binding(s))
        evs = res.spectral.eigenvalues
        actual_text = "{" + ", ".join(e.text() for e in evs) + "}"
        corrected, reason = CORRECTIONS.get((table, s), (None, ""))
        if all(isinstance(v, (Fraction, Surd)) for v in expected_values):
            ok = sorted(map(_key, expected_values)) == sorted(_key(e.exact) for e in evs if e.exact is not None)
            ok = ok and len(evs) == len(expected_values)
        else:
            ok = len(evs) == len(expected_values) and all(
                any(_close(v, e.approx) for e in evs) for v in expected_values)
        if corrected is not None:
            ok = [e.exact for e in evs] == corrected
        out.append(_row(table, f"s={s}", expected_text, actual_text, ok, corrected, reason))
    return out


def _key(v):
    if isinstance(v, Surd) and v.b:
        return (v.a, v.b, v.c)
    if isinstance(v, Surd):
        return (v.a, Fraction(0), 0)
    return (Fraction(v), Fraction(0), 0)


def _close(a, b, tol=mpmath.mpf(10) ** -10):
    return abs(a - b) <= tol * max(1, abs(a))


def _surd(a, b, c):
    return Surd(Fraction(a), Fraction(b), c)


CORRECTIONS[("table3", 0)] = ([Fraction(-3)], "follows the Table 1 correction: T = lambda + 3")


def table3():
    return _spectrum_rows("table3", PLUS, {
        0: ([Fraction(1)], "{1}"),
        1: ([_surd(-5, -2, 2), _surd(-5, 2, 2)], "{-2*sqrt(2)-5, 2*sqrt(2)-5}"),
        2: (_cardano(-7), "three Cardano forms shifted by -7"),
    })


def table4():
    return _spectrum_rows("table4", MINUS, {
        0: ([Fraction(1)], "{1}"),
        1: ([_surd(3, -2, 2), _surd(3, 2, 2)], "{3-2*sqrt(2), 2*sqrt(2)+3}"),
        2: (_cardano(5), "three Cardano forms shifted by +5"),
    })


# -- sextic eigenpairs -------------------------------------------------------

def _pairs_key(pairs):
    return sorted((_key(lam), tuple(_key(c) for c in P)) for lam, P in pairs)


def _eigenpair_rows(table, family, binding, published, exponent):
    out = []
    for s, (pairs, text) in published.items():
        res = _CASES.get(family, MINUS, s, **binding(s))
        actual = [(p.eigenvalue.exact, p.P) for p in res.spectral.eigenpairs]
        ok = all(x[0] is not None for x in actual) and _pairs_key(actual) == _pairs_key(pairs)
        ok = ok and all(r.zero for r in (p.residual for p in res.spectral.eigenpairs))
        actual_text = "; ".join(f"lambda={value_text(lam)}: {p.P_text()}"
                                for (lam, _), p in zip(actual, res.spectral.eigenpairs))
        out.append(_row(table, f"s={s}", text, actual_text, ok))
    return out + [exponent]


def _P(*coeffs):
    return tuple(c if isinstance(c, Surd) else Fraction(c) for c in coeffs)


def table6():
    h = Fraction(1, 2)
    published = {
        0: ([(Fraction(0), _P(1))], "{0}: 1"),
        2: ([(_surd(0, -2, 2), _P(_surd(0, h, 2), 0, 1)), (_surd(0, 2, 2), _P(_surd(0, -h, 2), 0, 1))],
            "{-+2*sqrt(2)}: x^2 +- 1/sqrt(2)"),
        4: ([(Fraction(0), _P(Fraction(-3, 2), 0, 0, 0, 1)),
             (Fraction(-8), _P(h, 0, 2, 0, 1)), (Fraction(8), _P(h, 0, -2, 0, 1))],
            "{0, -+8}: x^4 - 3/2, x^4 +- 2*x^2 + 1/2"),
    }
    res = _CASES.get("sextic1", MINUS, 2, **_sextic1_J(2))
    exp_text = res.spectral.eigenpairs[0].exponent_text()
    flag = RowResult("table6", "psi exponent", FLAG, "x^4/4", exp_text,
                     "misprint: the equation has the -2x^3 P' term, so psi = P exp(-x^4/4)")
    if exp_text != "-1/4*x^4":
        flag.status = FAIL
    return _eigenpair_rows("table6", "sextic1", _sextic1_J, published, flag)


def table8():
    h = Fraction(1, 2)
    published = {
        1: ([(Fraction(0), _P(0, 1))], "{0}: x"),
        3: ([(_surd(0, 2, 6), _P(0, _surd(0, -h, 6), 0, 1)), (_surd(0, -2, 6), _P(0, _surd(0, h, 6), 0, 1))],
            "{+-2*sqrt(6)}: x^3 -+ sqrt(6)/2*x"),
        5: ([(Fraction(0), _P(0, Fraction(-5, 2), 0, 0, 0, 1)),
             (_surd(0, 8, 2), _P(0, Fraction(3, 2), 0, _surd(0, -2, 2), 0, 1)),
             (_surd(0, -8, 2), _P(0, Fraction(3, 2), 0, _surd(0, 2, 2), 0, 1))],
            "{0, +-8*sqrt(2)}: x^5 - 5/2*x, x^5 -+ 2*sqrt(2)*x^3 + 3/2*x"),
    }
    res = _CASES.get("sextic2", MINUS, 1, **_sextic2_J(1))
    exp_text = res.spectral.eigenpairs[0].exponent_text()
    check = RowResult("table8", "psi exponent", PASS if exp_text == "-1/4*x^4" else FAIL,
                      "-x^4/4", exp_text)
    return _eigenpair_rows("table8", "sextic2", _sextic2_J, published, check)


# -- parameter varieties -----------------------------------------------------

def _variety_rows(table, family, sign, published):
    """``published``: s -> None (not integrable) or dict of params / lambda / P."""
    out = []
    for s, row in published.items():
        res = _CASES.get(family, sign, s)
        label = f"{sign.label} s={s}" if table in ("table14", "table15") else f"s={s}"
        note = ANALYSED_FAILURES.get((table, label), "")
        if row is None:
            actual = res.report.verdict if res.report.verdict == NOT_INTEGRABLE else _describe(res)
            out.append(_row(table, label, "Not integrable", actual,
                            res.report.verdict == NOT_INTEGRABLE, note=note))
            continue
        ok, actual = _match_variety(res, row)
        out.append(_row(table, label, _describe_expected(row), actual, ok, note=note))
    return out


def _describe_expected(row):
    parts = [f"{k}={v}" for k, v in row["params"].items()]
    return ", ".join(parts + [f"lambda={row['lambda']}", f"P={row['P']}"])


def _describe(res):
    pairs = res.spectral.eigenpairs if res.spectral is not None else []
    if not pairs:
        return f"{res.report.verdict}, basis {res.report.groebner_basis}"
    texts = []
    for p in pairs:
        params = _actual_params(p)
        parts = [f"{k}={v}" for k, v in params.items()]
        texts.append(", ".join(parts + [f"lambda={p.eigenvalue.text()}", f"P={p.P_text()}"]))
    return "; ".join(texts)


def _actual_params(pair):
    out = {}
    constrained = set()
    for c in pair.constraints:
        constrained |= c.variables()
    for k, v in pair.params.items():
        out[k] = value_text(v)
    for k in pair.symbolic:
        out[k] = "free" if k not in constrained else "constrained"
    return dict(sorted(out.items()))


def _match_variety(res, row):
    actual = _describe(res)
    pairs = res.spectral.eigenpairs if res.spectral is not None else []
    if len(pairs) != 1:
        return False, actual
    pair = pairs[0]
    params = _actual_params(pair)
    for k, v in row["params"].items():
        got = params.get(k)
        if v == "free":
            if got != "free":
                return False, actual
        elif got is None or got in ("free", "constrained") or Fraction(got) != Fraction(v):
            return False, actual
    reg = pair.f.f.registry
    lam = pair.eigenvalue.value
    lam_poly = lam if isinstance(lam, MultiPoly) else MultiPoly.constant(reg, lam) if isinstance(lam, Fraction) else None
    if lam_poly is None or lam_poly.embed(reg) != parse_poly(row["lambda"], reg):
        return False, actual
    if not _same_P(pair, row["P"]):
        return False, actual
    return bool(pair.residual and pair.residual.zero), actual


def _same_P(pair, text):
    reg = pair.f.f.registry
    expected = parse_xpoly(text, reg)
    if any(not isinstance(c, (Fraction, MultiPoly)) for c in pair.P):
        return False
    coeffs = [c.embed(reg) if isinstance(c, MultiPoly) else MultiPoly.constant(reg, c) for c in pair.P]
    return XPoly(reg, coeffs) == expected


def _octic(sign):
    m = 1 if sign is PLUS else -1
    return {
        0: {"params": {"mu": m * 4, "delta": "free"}, "lambda": "0", "P": "1"},
        1: {"params": {"mu": m * 6, "delta": -2}, "lambda": "0", "P": "x"},
        2: None, 3: None, 4: None,
        5: {"params": {"mu": m * 14, "delta": -2}, "lambda": "0", "P": f"x^5{'+' if m > 0 else '-'}2"},
    }


def _octic_exponent(table, sign):
    res = _CASES.get("octic", sign, 1)
    text = res.spectral.eigenpairs[0].exponent_text()
    want = "1/5*x^5" if sign is PLUS else "-1/5*x^5"
    published = "x^4/4 + (delta+2)*x" if sign is PLUS else "-x^4/4 - (delta+2)*x"
    return RowResult(table, "psi exponent", FLAG if text == want else FAIL, published, text,
                     "misprint: the antiderivative of x^4 + delta + 2 is x^5/5 + (delta+2)*x")


def table9():
    return _variety_rows("table9", "octic", PLUS, _octic(PLUS)) + [_octic_exponent("table9", PLUS)]


def table10():
    return _variety_rows("table10", "octic", MINUS, _octic(MINUS)) + [_octic_exponent("table10", MINUS)]


_DECATIC = {
    PLUS: {
        0: ("37/8", "-epsilon-87/64", "-3/8"),
        1: ("53/8", "64*epsilon+151", "-9/8"),
        2: ("69/8", "262144*epsilon^3+2117632*epsilon^2+6925504*epsilon+17694023",
            "(-4096*epsilon^2-19328*epsilon-49425)/16384"),
        3: ("85/8", "262144*epsilon^3+2904064*epsilon^2+11947200*epsilon+43776519",
            "(-4096*epsilon^2-27520*epsilon-85137)/16384"),
    },
    MINUS: {
        0: ("-43/8", "-epsilon+105/64", "3/8"),
        1: ("-59/8", "64*epsilon-169", "9/8"),
        2: ("-75/8", "262144*epsilon^3-2338816*epsilon^2+8178880*epsilon-3037945",
            "(4096*epsilon^2-21632*epsilon+55185)/16384"),
        3: ("-91/8", "262144*epsilon^3-3125248*epsilon^2+13642944*epsilon+2959431",
            "(4096*epsilon^2-29824*epsilon+93201)/16384"),
    },
}


def _decatic_rows(table, sign):
    out = []
    for s, (delta, M, lam) in _DECATIC[sign].items():
        res = _CASES.get("decatic", sign, s)
        sp = res.spectral
        reg = res.basis.order.registry
        want = [f"delta-({delta})", M, f"lambda-({lam})"]
        consts = list(sp.param_constraints)
        rels = list(sp.lambda_relations)
        got = [g.to_text() for g in consts + rels]
        ok = len(consts) == 2 and len(rels) == 1
        if ok:
            delta_el = [g for g in consts if "delta" in g.variables()]
            eps_el = [g for g in consts if g.variables() == {"epsilon"}]
            ok = (len(delta_el) == 1 and len(eps_el) == 1
                  and delta_el[0].primitive() == parse_poly(want[0], reg).primitive()
                  and eps_el[0].primitive() == parse_poly(M, reg).primitive()
                  and rels[0].primitive() == parse_poly(want[2], reg).primitive())
        bound = [p.bound_state for p in sp.eigenpairs]
        ok = ok and bound == [sign is MINUS] * len(bound) and len(bound) >= 1
        out.append(_row(table, f"s={s}", f"delta={delta}; M={M}; lambda={lam}", "; ".join(got), ok))
    return out


def table11():
    return _decatic_rows("table11", PLUS)


def table12():
    return _decatic_rows("table12", MINUS)


_TABLE13 = {
    PLUS: {0: "1", 1: "x", 2: "x^2-(64*epsilon+215)/256", 3: "x^3-(64*epsilon+279)/256*x"},
    MINUS: {0: "1", 1: "x", 2: "x^2+(64*epsilon-233)/256", 3: "x^3+(64*epsilon-297)/256*x"},
}


def table13():
    out = []
    for sign, rows in _TABLE13.items():
        for s, text in rows.items():
            res = _CASES.get("decatic", sign, s)
            pairs = res.spectral.eigenpairs
            ok = len(pairs) == 1 and _same_P(pairs[0], text) and pairs[0].residual.zero
            actual = "; ".join(p.P_text() for p in pairs)
            out.append(_row("table13", f"{sign.label} s={s}", text, actual, ok))
    return out


def table14():
    out = []
    for sign in (PLUS, MINUS):
        m = 1 if sign is PLUS else -1
        out += _variety_rows("table14", "dodecatic", sign, {
            0: {"params": {"mu": 6 * m, "kappa": "free"}, "lambda": "-kappa^2/4", "P": "1"},
            1: {"params": {"mu": 8 * m, "kappa": 0}, "lambda": "0", "P": "x"},
            2: None, 3: None, 4: None,
        })
    return out


def table15():
    out = []
    for sign in (PLUS, MINUS):
        m = 1 if sign is PLUS else -1
        out += _variety_rows("table15", "tetrakaidecatic", sign, {
            0: {"params": {"mu": 7 * m, "delta": "free", "kappa": 0}, "lambda": "0", "P": "1"},
            1: {"params": {"mu": 9 * m, "delta": -2, "kappa": 0}, "lambda": "0", "P": "x"},
            2: None, 3: None, 4: None,
        })
    return out


TABLES = {f"table{i}": globals()[f"table{i}"] for i in range(1, 16)}
_CASES = _Cases()


def reproduce_corpus(table="all"):
    """Recompute one table (``"table7"``, ``"7"``) or all of them."""
    if table == "all":
        names = list(TABLES)
    else:
        name = table if str(table).startswith("table") else f"table{table}"
        if name not in TABLES:
            raise UsageError(f"unknown table {table!r}; choose one of {', '.join(TABLES)} or all")
        names = [name]
    report = CorpusReport()
    for name in names:
        report.rows.extend(TABLES[name]())
    return report


def published_value(table, s):
    """The published spectral polynomial text for a row of Tables 1, 2, 5 or 7."""
    return {"table1": _TABLE1, "table2": _TABLE2, "table5": _TABLE5, "table7": _TABLE7}[table][s]


def corrected_value(table, s):
    if (table, s) in CORRECTIONS:
        return CORRECTIONS[(table, s)][0]
    return published_value(table, s)
