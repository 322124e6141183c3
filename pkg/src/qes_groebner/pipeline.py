"""Problem files, per-case orchestration and report records."""

from __future__ import annotations

import re
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from .algebra import EIGENVALUE, SPATIAL, VarRegistry, format_rational
from .ansatz import UNKNOWN_RE, ansatz_residual, build_system
from .characterization import (INTEGRABLE, MINUS, NOT_INTEGRABLE, PLUS, UNCONSTRAINED,
                               BranchSign, auxiliary_ode, parity_guard, quantization)
from .errors import BudgetExceeded, ParseError, UsageError
from .groebner import MonomialOrder, buchberger_reduced
from .parsing import NAME_RE, collect_names, parse_xpoly
from .spectral import (DEFAULT_PRECISION, DEFAULT_TOLERANCE, require_verified,
                       solve_eigenpairs, spectral_extract, value_text)
from .square import complete_square, shift_by_lambda

BUDGET_EXCEEDED = "BudgetExceeded"
FREE = "free"
_KEY_RE = re.compile(r"(potential|s_max|signs|tolerance|precision|param\.([^\s=]*))\Z")


@dataclass
class ProblemSpec:
    potential: str
    params: dict = field(default_factory=dict)
    s_max: int = 10
    signs: tuple = (PLUS, MINUS)
    tolerance: Fraction = DEFAULT_TOLERANCE
    precision: int = DEFAULT_PRECISION
    source: str = "<string>"

    def free_parameters(self):
        return [n for n, v in self.params.items() if v is None]

    def to_dict(self):
        return {
            "potential": self.potential,
            "params": {n: (FREE if v is None else format_rational(v)) for n, v in self.params.items()},
            "s_max": self.s_max,
            "signs": [s.label for s in self.signs],
            "tolerance": format_rational(self.tolerance),
            "precision": self.precision,
        }

    def registry(self):
        return VarRegistry.build(eigenvalue=True, parameters=self.free_parameters())

    def potential_poly(self):
        """The potential over ``lambda`` and the free parameters, bindings applied."""
        reg = self.registry()
        V = parse_xpoly(self.potential, self._full_registry())
        bound = {n: v for n, v in self.params.items() if v is not None}
        return V.substitute(bound).embed(reg)

    def _full_registry(self):
        return VarRegistry.build(eigenvalue=True, parameters=list(self.params))


def _parse_rational(text, line, col, what):
    m = re.fullmatch(r"\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*", text)
    if not m:
        raise ParseError(f"{what} must be a rational like 3 or -7/8, got {text.strip()!r}", line, col)
    den = int(m.group(2) or 1)
    if den == 0:
        raise ParseError("zero denominator", line, col)
    return Fraction(int(m.group(1)), den)


def _parse_tolerance(text, line, col):
    try:
        value = Fraction(text.strip())
    except ValueError:
        raise ParseError(f"tolerance must be a number, got {text.strip()!r}", line, col) from None
    if value <= 0:
        raise ParseError("tolerance must be positive", line, col)
    return value


def _parse_int(text, line, col, what, minimum):
    try:
        value = int(text.strip())
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {text.strip()!r}", line, col) from None
    if value < minimum:
        raise ParseError(f"{what} must be at least {minimum}", line, col)
    return value


def parse_signs(text, line=1, col=1):
    word = text.strip().lower()
    if word == "both":
        return (PLUS, MINUS)
    out = []
    for part in re.split(r"[\s,]+", word):
        if not part:
            continue
        try:
            sign = BranchSign.parse(part)
        except UsageError as exc:
            raise ParseError(str(exc), line, col) from None
        if sign not in out:
            out.append(sign)
    if not out:
        raise ParseError("signs must name plus, minus or both", line, col)
    return tuple(s for s in (PLUS, MINUS) if s in out)


def _check_param_name(name, line, col):
    if not NAME_RE.match(name):
        raise ParseError(f"invalid parameter name {name!r}", line, col)
    if name in (SPATIAL, EIGENVALUE) or UNKNOWN_RE.match(name):
        raise ParseError(f"{name!r} is reserved and cannot be a parameter", line, col)


def parse_problem_text(text, source="<string>"):
    """Parse the ``key = value`` problem format; errors carry line and column."""
    seen = {}
    params = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0]
        if not stripped.strip():
            continue
        if "=" not in stripped:
            col = len(raw) - len(raw.lstrip()) + 1
            raise ParseError("expected 'key = value'", lineno, col)
        key_part, value = stripped.split("=", 1)
        key = key_part.strip()
        key_col = len(key_part) - len(key_part.lstrip()) + 1
        value_col = len(key_part) + 2 + (len(value) - len(value.lstrip()))
        m = _KEY_RE.match(key)
        if not m:
            raise ParseError(f"unknown key {key!r}", lineno, key_col)
        if key in seen:
            raise ParseError(f"duplicate key {key!r} (first on line {seen[key][0]})", lineno, key_col)
        seen[key] = (lineno, value, value_col)
        if m.group(2) is not None:
            name = m.group(2)
            _check_param_name(name, lineno, key_col + len("param."))
            word = value.strip()
            params[name] = None if word.lower() == FREE else _parse_rational(
                value, lineno, value_col, f"param.{name}")
    if "potential" not in seen:
        raise ParseError("missing required key 'potential'", 1, 1)

    line, potential, pcol = seen["potential"]
    potential = potential.strip()
    for name in collect_names(potential, line, pcol - 1):
        if name == EIGENVALUE or UNKNOWN_RE.match(name):
            col = _name_column(potential, name) + pcol
            raise ParseError(f"{name!r} is reserved and cannot appear in the potential", line, col)
        if name not in params:
            params[name] = None
    spec = ProblemSpec(potential, params, source=source)
    if "s_max" in seen:
        ln, v, c = seen["s_max"]
        spec.s_max = _parse_int(v, ln, c, "s_max", 0)
    if "signs" in seen:
        ln, v, c = seen["signs"]
        spec.signs = parse_signs(v, ln, c)
    if "tolerance" in seen:
        ln, v, c = seen["tolerance"]
        spec.tolerance = _parse_tolerance(v, ln, c)
    if "precision" in seen:
        ln, v, c = seen["precision"]
        spec.precision = _parse_int(v, ln, c, "precision", 15)
    validate_potential(spec, line, pcol)
    return spec


def _name_column(text, name):
    m = re.search(rf"(?<![A-Za-z0-9_]){re.escape(name)}(?![A-Za-z0-9_])", text)
    return m.start() if m else 0


def validate_potential(spec, line=1, col=1):
    """Parse the potential; even degree >= 2 must be monic after binding."""
    V = parse_xpoly(spec.potential, spec._full_registry(), line, col - 1)
    bound = {n: v for n, v in spec.params.items() if v is not None}
    V = V.substitute(bound)
    deg = V.degree if V else 0
    if deg >= 2 and deg % 2 == 0:
        lead = V.leading()
        if not lead.is_constant() or lead.constant_value() != 1:
            raise ParseError(f"potential must be monic, leading coefficient is {lead}", line, col)
    return V


def parse_problem(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_problem_text(text, str(path))


# -- reports ---------------------------------------------------------------

@dataclass
class CaseReport:
    sign: str | None
    s: int | None
    verdict: str
    quantization: str | None = None
    generators: list = field(default_factory=list)
    order: str | None = None
    groebner_basis: list = field(default_factory=list)
    T: str | None = None
    lambda_relations: list = field(default_factory=list)
    param_constraints: list = field(default_factory=list)
    free_parameters: list = field(default_factory=list)
    eigenpairs: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    error: str | None = None
    timing: float | None = None

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


@dataclass
class CaseResult:
    """A report plus the in-memory objects it was rendered from."""

    report: CaseReport
    system: object = None
    basis: object = None
    spectral: object = None


def eigenpair_record(pair):
    ev = pair.eigenvalue
    return {
        "lambda": ev.text(),
        "lambda_approx": ev.approx_text(),
        "exact": ev.is_exact,
        "multiplicity": ev.multiplicity,
        "residual_bound": format_rational(ev.residual_bound),
        "P": pair.P_text(),
        "params": {k: value_text(v) for k, v in sorted(pair.params.items())},
        "symbolic_params": list(pair.symbolic),
        "constraints": [c.to_text() for c in pair.constraints],
        "exponent": pair.exponent_text(),
        "wavefunction": pair.wavefunction_text(),
        "bound_state": pair.bound_state,
        "residual": pair.residual.text() if pair.residual is not None else None,
    }


def run_case(V, n, sign, s, precision=DEFAULT_PRECISION, tolerance=DEFAULT_TOLERANCE,
             max_pairs=None, timing=False, max_seconds=None):
    """One (sign, s) case for the monic potential ``V`` of degree 2n."""
    start = time.perf_counter()
    report = CaseReport(sign.label, s, NOT_INTEGRABLE)
    sfl = shift_by_lambda(complete_square(V, n))
    q = quantization(sfl, s, sign)
    report.quantization = q.polynomial.to_text() + " = 0"
    if not q.satisfiable:
        report.groebner_basis = ["1"]
        report.notes.append("quantization constraint has no solution")
        return _stamp(CaseResult(report), start, timing)
    ode = auxiliary_ode(sfl, sign)
    system = build_system(ansatz_residual(ode, s), [q], n, s)
    order = MonomialOrder.block_lex(system.registry)
    report.generators = [g.to_text() for g in system.generators]
    report.order = order.describe()
    try:
        G = buchberger_reduced(system.generators, order, max_pairs=max_pairs,
                               max_seconds=max_seconds)
    except BudgetExceeded as exc:
        report.verdict = BUDGET_EXCEEDED
        report.error = str(exc)
        return _stamp(CaseResult(report, system), start, timing)
    report.groebner_basis = G.texts()
    result = spectral_extract(G, s)
    report.verdict = result.verdict
    if result.T is not None:
        report.T = result.T.to_text()
    report.lambda_relations = [g.to_text() for g in result.lambda_relations]
    report.param_constraints = [g.to_text() for g in result.param_constraints]
    if result.verdict == INTEGRABLE:
        solve_eigenpairs(G, result, sign, n, s, sfl, precision, tolerance)
        for pair in result.eigenpairs:
            require_verified(V, pair, tolerance)
    report.free_parameters = _free_in_variety(G, system.registry)
    report.eigenpairs = [eigenpair_record(p) for p in result.eigenpairs]
    report.notes.extend(result.notes)
    return _stamp(CaseResult(report, system, G, result), start, timing)


def _free_in_variety(G, registry):
    if G.is_unit():
        return []
    used = set()
    for g in G.elements:
        used |= g.variables()
    return [p for p in registry.names_in("parameter") if p not in used]


def _stamp(result, start, timing):
    if timing:
        result.report.timing = round(time.perf_counter() - start, 6)
    return result


def run_pipeline(spec, s_values=None, max_pairs=None, timing=False, keep_objects=False,
                 max_seconds=None):
    """All (sign, s) cases of a problem, ordered by (s, sign)."""
    V = spec.potential_poly()
    guard = parity_guard(V)
    if guard.verdict == NOT_INTEGRABLE:
        results = [CaseResult(CaseReport(None, None, NOT_INTEGRABLE, notes=[guard.reason]))]
    elif guard.n == 0:
        note = f"constant potential is {guard.advisory}: every lambda admits exponential solutions"
        results = [CaseResult(CaseReport(None, None, UNCONSTRAINED, notes=[note]))]
    else:
        s_values = range(spec.s_max + 1) if s_values is None else s_values
        results = []
        for s in s_values:
            for sign in spec.signs:
                res = run_case(V, guard.n, sign, s, spec.precision, spec.tolerance,
                               max_pairs, timing, max_seconds)
                if guard.advisory:
                    res.report.notes.append(f"degree-2 potential is {guard.advisory}")
                results.append(res)
    return results if keep_objects else [r.report for r in results]
