"""Buchberger's algorithm for reduced lex Groebner bases over Q.

Polynomials enter and leave as ``MultiPoly``.  Inside the engine they are
plain dicts keyed by exponent tuples permuted into priority order, so lex
comparison is Python tuple comparison.  Pair pruning follows Gebauer and
Moller (coprime leading monomials plus the chain criterion).
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import MultiPoly, _BLOCK_RANK
from .errors import BudgetExceeded, InternalError, UsageError

DEFAULT_MAX_PAIRS = 10**6
DEFAULT_MAX_TERMS = 200_000
BUDGET_ENV = "QES_BUDGET_PAIRS"
SECONDS_ENV = "QES_BUDGET_SECONDS"


@dataclass(frozen=True)
class MonomialOrder:
    """Pure lex order along ``priority`` (largest variable first)."""

    registry: object
    priority: tuple = None
    kind: str = "lex"
    _perm: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.kind != "lex":
            raise UsageError(f"unsupported monomial order {self.kind!r}")
        reg = self.registry
        priority = tuple(self.priority) if self.priority is not None else reg.names
        if sorted(priority) != sorted(reg.names):
            raise UsageError("priority must be a permutation of the registry")
        ranks = [_BLOCK_RANK[reg.block_of(n)] for n in priority]
        if ranks != sorted(ranks):
            raise UsageError("priority must honor ansatz > eigenvalue > parameter")
        object.__setattr__(self, "priority", priority)
        object.__setattr__(self, "_perm", tuple(reg.index(n) for n in priority))

    @classmethod
    def block_lex(cls, registry):
        return cls(registry, registry.names)

    def key(self, mono):
        return tuple(mono[i] for i in self._perm)

    def unkey(self, key):
        mono = [0] * len(key)
        for k, i in enumerate(self._perm):
            mono[i] = key[k]
        return tuple(mono)

    def describe(self):
        return "lex " + " > ".join(self.priority)


def monomial_compare(a, b, order):
    """-1, 0 or 1 as monomial ``a`` is less than, equal to or greater than ``b``."""
    ka, kb = order.key(tuple(a)), order.key(tuple(b))
    return (ka > kb) - (ka < kb)


# -- internal dict polynomials --------------------------------------------

def _to_internal(f, order):
    if f.registry != order.registry:
        raise UsageError("polynomial registry does not match the monomial order")
    return {order.key(m): c for m, c in f.terms.items()}


def _to_multipoly(p, order):
    return MultiPoly._raw(order.registry, {order.unkey(k): c for k, c in p.items()})


def _lm(p):
    return max(p)


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _monic(p):
    lc = p[_lm(p)]
    if lc == 1:
        return p
    inv = 1 / lc
    return {m: c * inv for m, c in p.items()}


class _Budget:
    def __init__(self, max_pairs, max_terms, max_seconds=None):
        self.max_pairs = max_pairs
        self.max_terms = max_terms
        self.deadline = None if max_seconds is None else time.monotonic() + max_seconds
        self.pairs = 0
        self.largest = 0
        self.basis_size = 0
        self.steps = 0

    def check_terms(self, p):
        n = len(p)
        if n > self.largest:
            self.largest = n
        if n > self.max_terms:
            raise BudgetExceeded("term-count cap exceeded", self.pairs, self.basis_size, n)
        self.steps += 1
        if self.steps % 64 == 0:
            self.check_time()

    def check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("time budget exceeded", self.pairs, self.basis_size, self.largest)

    def count_pair(self):
        self.pairs += 1
        if self.pairs > self.max_pairs:
            raise BudgetExceeded("pair budget exceeded", self.pairs, self.basis_size, self.largest)
        self.check_time()


def _reduce(f, basis, budget=None, full=True):
    """Remainder of ``f`` on division by ``basis`` (list of (lm, monic poly))."""
    p = dict(f)
    rem = {}
    while p:
        m = max(p)
        c = p[m]
        for g_lm, g in basis:
            if _divides(g_lm, m):
                q = tuple(x - y for x, y in zip(m, g_lm))
                for gm, gc in g.items():
                    k = tuple(x + y for x, y in zip(gm, q))
                    v = p.get(k, 0) - c * gc
                    if v:
                        p[k] = v
                    else:
                        del p[k]
                if budget is not None:
                    budget.check_terms(p)
                break
        else:
            if not full:
                rem.update(p)
                return rem
            rem[m] = c
            del p[m]
    return rem


def _spoly(f, g):
    lf, lg = _lm(f), _lm(g)
    l = _lcm(lf, lg)
    qf = tuple(x - y for x, y in zip(l, lf))
    qg = tuple(x - y for x, y in zip(l, lg))
    cf, cg = f[lf], g[lg]
    out = {}
    for m, c in f.items():
        k = tuple(x + y for x, y in zip(m, qf))
        out[k] = c / cf
    for m, c in g.items():
        k = tuple(x + y for x, y in zip(m, qg))
        v = out.get(k, 0) - c / cg
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def normal_form(f, G, order=None):
    """Fully reduced remainder of ``f`` modulo the list ``G``."""
    if not G:
        raise UsageError("normal_form needs a nonempty divisor list")
    order = order or MonomialOrder.block_lex(f.registry)
    basis = []
    for g in G:
        if not g:
            raise UsageError("divisors must be nonzero")
        gi = _monic(_to_internal(g, order))
        basis.append((_lm(gi), gi))
    return _to_multipoly(_reduce(_to_internal(f, order), basis), order)


def s_polynomial(f, g, order=None):
    """lcm/LT(f) * f - lcm/LT(g) * g."""
    if not f or not g:
        raise UsageError("S-polynomial of a zero polynomial")
    order = order or MonomialOrder.block_lex(f.registry)
    return _to_multipoly(_spoly(_to_internal(f, order), _to_internal(g, order)), order)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced basis: primitive elements sorted by increasing leading monomial."""

    order: MonomialOrder
    elements: tuple
    pairs_processed: int = 0

    def is_unit(self):
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def is_zero_ideal(self):
        return not self.elements

    def texts(self):
        return [g.to_text() for g in self.elements]

    def dump(self):
        """Diagnostic text: order header, then one element per line."""
        lines = [f"# order: {self.order.describe()}"]
        lines += self.texts()
        return "\n".join(lines) + "\n"


def _resolve_max_pairs(max_pairs):
    if max_pairs is not None:
        return max_pairs
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{BUDGET_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_MAX_PAIRS


def _resolve_max_seconds(max_seconds):
    if max_seconds is not None:
        return max_seconds
    env = os.environ.get(SECONDS_ENV)
    if env:
        try:
            return float(env)
        except ValueError:
            raise UsageError(f"{SECONDS_ENV} must be a number, got {env!r}") from None
    return None


def _update(store, active, pairs, h):
    """Gebauer-Moller update after adding ``store[h]`` to the basis."""
    lm = {i: store[i][0] for i in active}
    lh = store[h][0]
    cand = [(g, _lcm(lh, lm[g])) for g in active]
    kept = []
    for idx, (g1, l1) in enumerate(cand):
        if _coprime(lh, lm[g1]):
            kept.append((g1, l1, True))
            continue
        redundant = False
        for j, (g2, l2) in enumerate(cand):
            if j > idx and _divides(l2, l1):
                redundant = True
                break
        if not redundant:
            for g2, l2, _ in kept:
                if _divides(l2, l1):
                    redundant = True
                    break
        if not redundant:
            kept.append((g1, l1, False))
    new_pairs = []
    for g1, g2, l12 in pairs:
        if (not _divides(lh, l12)
                or _lcm(store[g1][0], lh) == l12
                or _lcm(lh, store[g2][0]) == l12):
            new_pairs.append((g1, g2, l12))
    for g, l, coprime in kept:
        if not coprime:
            new_pairs.append((g, h, l))
    new_active = [g for g in active if not _divides(lh, lm[g])]
    new_active.append(h)
    return new_active, new_pairs


def _pair_key(pair):
    l = pair[2]
    return (sum(l), l, pair[0], pair[1])


def leading_monomial(f, order):
    """Leading monomial of ``f`` (registry exponent vector) under ``order``."""
    if not f:
        raise UsageError("the zero polynomial has no leading monomial")
    return order.unkey(max(order.key(m) for m in f.terms))


def buchberger_reduced(F, order=None, max_pairs=None, max_terms=None, verify=True,
                       max_seconds=None):
    """Reduced Groebner basis of the ideal generated by ``F``.

    Zero generators are dropped; if nothing is left the zero ideal's empty
    basis is returned.  A unit ideal comes back as the single element 1.
    """
    F = [f for f in F if f]
    if not F:
        if order is None:
            raise UsageError("order required for the zero ideal")
        return GroebnerBasis(order, ())
    order = order or MonomialOrder.block_lex(F[0].registry)
    budget = _Budget(_resolve_max_pairs(max_pairs), max_terms or DEFAULT_MAX_TERMS,
                     _resolve_max_seconds(max_seconds))
    one = {(0,) * len(order.registry): Fraction(1)}

    inputs = [_to_internal(f, order) for f in F]
    store = []
    active = []
    pairs = []
    for f in sorted(inputs, key=_lm):
        h = _reduce(f, [store[i] for i in active], budget)
        if not h:
            continue
        h = _monic(h)
        if not any(_lm(h)):
            return _finish([one], order, F, budget, verify)
        store.append((_lm(h), h))
        budget.basis_size = len(store)
        active, pairs = _update(store, active, pairs, len(store) - 1)

    while pairs:
        best = min(range(len(pairs)), key=lambda i: _pair_key(pairs[i]))
        g1, g2, _ = pairs.pop(best)
        budget.count_pair()
        s = _spoly(store[g1][1], store[g2][1])
        h = _reduce(s, [store[i] for i in active], budget)
        if not h:
            continue
        h = _monic(h)
        if not any(_lm(h)):
            return _finish([one], order, F, budget, verify)
        store.append((_lm(h), h))
        budget.basis_size = len(store)
        active, pairs = _update(store, active, pairs, len(store) - 1)

    basis = [store[i] for i in active]
    reduced = []
    for i, (lm, g) in enumerate(basis):
        others = basis[:i] + basis[i + 1:]
        r = _reduce(g, others, budget)
        reduced.append(_monic(r))
    return _finish(reduced, order, F, budget, verify)


def _finish(polys, order, F, budget, verify):
    elements = []
    for p in polys:
        elements.append(_to_multipoly(p, order).primitive())
    elements.sort(key=lambda g: order.key(leading_monomial(g, order)))
    gb = GroebnerBasis(order, tuple(elements), budget.pairs)
    if verify:
        check_basis(gb, F)
    return gb


def check_basis(gb, F=()):
    """Assert the Buchberger criterion and membership of every generator."""
    order = gb.order
    basis = []
    for g in gb.elements:
        gi = _monic(_to_internal(g, order))
        basis.append((_lm(gi), gi))
    if not basis:
        if any(F):
            raise InternalError("nonzero generators but empty basis")
        return
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if _coprime(basis[i][0], basis[j][0]):
                continue
            if _reduce(_spoly(basis[i][1], basis[j][1]), basis):
                raise InternalError(
                    f"S-polynomial of {gb.elements[i]} and {gb.elements[j]} does not reduce to 0")
    for f in F:
        if f and _reduce(_to_internal(f, order), basis):
            raise InternalError(f"generator {f} is not in the computed ideal")
    for i, (lm, _) in enumerate(basis):
        for j, (_, g) in enumerate(basis):
            if i != j and any(_divides(lm, m) for m in g):
                raise InternalError("basis is not reduced")


def eliminate(G, keep):
    """Basis elements involving only variables in ``keep``.

    ``keep`` must be a tail of the order's priority so that lex elimination
    applies.
    """
    keep = set(keep)
    priority = G.order.priority
    unknown = keep - set(priority)
    if unknown:
        raise UsageError(f"unknown variables {sorted(unknown)}")
    tail = priority[len(priority) - len(keep):] if keep else ()
    if set(tail) != keep:
        raise UsageError(f"lex order {G.order.describe()} does not eliminate down to {sorted(keep)}")
    return [g for g in G.elements if g.variables() <= keep]

