"""Buchberger's algorithm, normal forms and ideal membership (plain mode only).

Internally a polynomial is a dict from dense exponent tuples to Fractions
over a fixed, sorted list of variables.  Reduced bases are unique, so the
output does not depend on the pair-processing schedule; the schedule itself
is also fully deterministic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import BudgetExceeded, InputError, RingModeError
from .polyring import DEGREVLEX, LEX, PLAIN, MONOMIAL_ORDERS, Polynomial, Var

DEFAULT_MAX_STEPS = 2_000_000
DEFAULT_MAX_BASIS = 5_000

Exps = tuple[int, ...]
Dense = dict[Exps, Fraction]


@dataclass(frozen=True)
class Budget:
    """Caps on reduction steps and basis size for one Buchberger run."""

    max_steps: int = DEFAULT_MAX_STEPS
    max_basis: int = DEFAULT_MAX_BASIS

    def __post_init__(self):
        if self.max_steps < 1 or self.max_basis < 1:
            raise InputError("budget caps must be positive")

    @classmethod
    def from_env(cls, env: str = "OPCOACT_BUDGET") -> "Budget":
        """Read ``N`` (step cap) or ``steps=N,basis=M`` from the environment."""
        raw = os.environ.get(env, "").strip()
        if not raw:
            return cls()
        try:
            if "=" not in raw:
                return cls(max_steps=int(raw))
            fields = dict(part.split("=", 1) for part in raw.split(","))
            return cls(
                max_steps=int(fields.get("steps", DEFAULT_MAX_STEPS)),
                max_basis=int(fields.get("basis", DEFAULT_MAX_BASIS)),
            )
        except ValueError as exc:
            raise InputError(f"cannot parse {env}={raw!r}") from exc


@dataclass(frozen=True)
class Ideal:
    generators: tuple[Polynomial, ...]
    order: str = DEGREVLEX

    def __init__(self, generators: Iterable[Polynomial], order: str = DEGREVLEX):
        gens = tuple(g for g in generators if not g.is_zero())
        for g in gens:
            if g.mode != PLAIN:
                raise RingModeError("Groebner computations need plain-mode polynomials")
        if order not in MONOMIAL_ORDERS:
            raise InputError(f"unknown monomial order {order!r}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "order", order)


@dataclass(frozen=True)
class GroebnerBasis:
    basis: tuple[Polynomial, ...]
    order: str = DEGREVLEX
    reduced: bool = True
    steps: int = field(default=0, compare=False)


# dense ring helpers ------------------------------------------------------

def _order_key(order: str) -> Callable[[Exps], tuple]:
    if order == DEGREVLEX:
        return lambda e: (sum(e), tuple(-x for x in reversed(e)))
    if order == LEX:
        return lambda e: e
    raise InputError(f"unknown monomial order {order!r}")


class _Ring:
    """Dense exponent-vector view of a fixed set of variables."""

    def __init__(self, variables: Iterable[Var], order: str):
        self.vars: list[Var] = sorted(set(variables), key=lambda v: v.key)
        self.index = {v: k for k, v in enumerate(self.vars)}
        self.order = order
        self.key = _order_key(order)

    def to_dense(self, p: Polynomial) -> Dense:
        n = len(self.vars)
        out: Dense = {}
        for m, c in p.terms.items():
            e = [0] * n
            for v, k in m:
                e[self.index[v]] = k
            out[tuple(e)] = c
        return out

    def to_poly(self, f: Dense) -> Polynomial:
        terms = {}
        for e, c in f.items():
            mono = tuple((self.vars[k], x) for k, x in enumerate(e) if x)
            terms[mono] = c
        return Polynomial(terms, PLAIN)

    def lead(self, f: Dense) -> Exps:
        return max(f, key=self.key)


def _divides(a: Exps, b: Exps) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exps, b: Exps) -> Exps:
    return tuple(max(x, y) for x, y in zip(a, b))


def _quotient(a: Exps, b: Exps) -> Exps:
    return tuple(x - y for x, y in zip(a, b))


def _monic(f: Dense, lead: Exps) -> Dense:
    c = f[lead]
    if c == 1:
        return f
    inv = 1 / c
    return {e: a * inv for e, a in f.items()}


class _Counter:
    def __init__(self, budget: Budget):
        self.budget = budget
        self.steps = 0

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.budget.max_steps:
            raise BudgetExceeded(f"reduction step cap {self.budget.max_steps} exceeded")


def _reduce(f: Dense, basis: Sequence[Dense], leads: Sequence[Exps], ring: _Ring,
            counter: _Counter | None, full: bool = True) -> Dense:
    """Multivariate division remainder.

    Each step reduces the largest remaining term by the basis element with
    the smallest leading monomial, ties broken by smallest index.
    """
    if not f:
        return {}
    key = ring.key
    reducers = sorted(range(len(basis)), key=lambda k: (key(leads[k]), k))
    f = dict(f)
    remainder: Dense = {}
    while f:
        m = max(f, key=key)
        c = f[m]
        chosen = None
        for k in reducers:
            if _divides(leads[k], m):
                chosen = k
                break
        if chosen is None:
            remainder[m] = c
            del f[m]
            if not full:
                remainder.update(f)
                return remainder
            continue
        if counter is not None:
            counter.tick()
        g = basis[chosen]
        shift = _quotient(m, leads[chosen])
        factor = c / g[leads[chosen]]
        for e, a in g.items():
            t = tuple(x + y for x, y in zip(e, shift))
            v = f.get(t, Fraction(0)) - factor * a
            if v:
                f[t] = v
            else:
                f.pop(t, None)
    return remainder


def _reduced_basis(basis: list[Dense], ring: _Ring, counter: _Counter | None) -> list[Dense]:
    """Minimalize then interreduce; sorted by descending leading monomial."""
    key = ring.key
    leads = [ring.lead(g) for g in basis]
    order = sorted(range(len(basis)), key=lambda k: (key(leads[k]), k))
    kept: list[int] = []
    for k in order:
        if not any(_divides(leads[j], leads[k]) for j in kept):
            kept.append(k)
    minimal = [basis[k] for k in kept]
    min_leads = [leads[k] for k in kept]
    result = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        other_leads = min_leads[:k] + min_leads[k + 1:]
        lead = min_leads[k]
        tail = {e: a for e, a in g.items() if e != lead}
        r = _reduce(tail, others, other_leads, ring, counter)
        r[lead] = g[lead]
        result.append(_monic(r, lead))
    result.sort(key=lambda g: key(ring.lead(g)), reverse=True)
    return result


def _dense_buchberger(gens: list[Dense], ring: _Ring, budget: Budget) -> tuple[list[Dense], int]:
    counter = _Counter(budget)
    key = ring.key
    basis: list[Dense] = []
    leads: list[Exps] = []
    pending: set[tuple[int, int]] = set()

    def add(g: Dense) -> None:
        lead = ring.lead(g)
        g = _monic(g, lead)
        new = len(basis)
        basis.append(g)
        leads.append(lead)
        if len(basis) > budget.max_basis:
            raise BudgetExceeded(f"basis size cap {budget.max_basis} exceeded")
        for j in range(new):
            pending.add((j, new))

    for g in gens:
        r = _reduce(g, basis, leads, ring, counter)
        if r:
            add(r)

    while pending:
        i, j = min(
            pending,
            key=lambda ij: (sum(_lcm(leads[ij[0]], leads[ij[1]])),
                            key(_lcm(leads[ij[0]], leads[ij[1]])), ij),
        )
        pending.discard((i, j))
        lcm = _lcm(leads[i], leads[j])
        # criterion 1: coprime leading monomials
        if all(x == 0 or y == 0 for x, y in zip(leads[i], leads[j])):
            continue
        # criterion 2: chain through a basis element whose pairs are already done
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or not _divides(leads[k], lcm):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                skip = True
                break
        if skip:
            continue
        si = _quotient(lcm, leads[i])
        sj = _quotient(lcm, leads[j])
        spoly: Dense = {}
        for e, a in basis[i].items():
            t = tuple(x + y for x, y in zip(e, si))
            spoly[t] = spoly.get(t, Fraction(0)) + a
        for e, a in basis[j].items():
            t = tuple(x + y for x, y in zip(e, sj))
            v = spoly.get(t, Fraction(0)) - a
            if v:
                spoly[t] = v
            else:
                spoly.pop(t, None)
        spoly = {e: a for e, a in spoly.items() if a}
        r = _reduce(spoly, basis, leads, ring, counter)
        if r:
            add(r)

    return _reduced_basis(basis, ring, counter), counter.steps


# public API --------------------------------------------------------------

def buchberger(ideal: Ideal | Iterable[Polynomial], budget: Budget | None = None,
               order: str | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal``.

    Raises ``BudgetExceeded`` instead of returning a partial basis.
    """
    if not isinstance(ideal, Ideal):
        ideal = Ideal(ideal, order or DEGREVLEX)
    budget = budget or Budget.from_env()
    gens = ideal.generators
    if not gens:
        return GroebnerBasis((), ideal.order, True, 0)
    ring = _Ring((v for g in gens for v in g.variables()), ideal.order)
    dense, steps = _dense_buchberger([ring.to_dense(g) for g in gens], ring, budget)
    return GroebnerBasis(tuple(ring.to_poly(g) for g in dense), ideal.order, True, steps)


def normal_form(p: Polynomial, gb: GroebnerBasis, budget: Budget | None = None) -> Polynomial:
    """Complete division remainder of ``p`` by a reduced basis."""
    if p.mode != PLAIN:
        raise RingModeError("normal forms need plain-mode polynomials")
    if p.is_zero() or not gb.basis:
        return p
    ring = _Ring(set(p.variables()).union(*(g.variables() for g in gb.basis)), gb.order)
    basis = [ring.to_dense(g) for g in gb.basis]
    leads = [ring.lead(g) for g in basis]
    counter = _Counter(budget or Budget.from_env())
    return ring.to_poly(_reduce(ring.to_dense(p), basis, leads, ring, counter))


def ideal_contains(p: Polynomial, ideal: Ideal | GroebnerBasis, budget: Budget | None = None) -> bool:
    gb = ideal if isinstance(ideal, GroebnerBasis) else buchberger(ideal, budget)
    return normal_form(p, gb, budget).is_zero()


def leading_monomial(p: Polynomial, order: str = DEGREVLEX):
    """Largest monomial of a nonzero polynomial under ``order``."""
    if p.is_zero():
        raise InputError("the zero polynomial has no leading monomial")
    return p.sorted_terms(order)[0][0]


def s_polynomial(f: Polynomial, g: Polynomial, order: str = DEGREVLEX) -> Polynomial:
    ring = _Ring(f.variables() | g.variables(), order)
    df, dg = ring.to_dense(f), ring.to_dense(g)
    lf, lg = ring.lead(df), ring.lead(dg)
    lcm = _lcm(lf, lg)
    out: Dense = {}
    for src, lead, sign in ((df, lf, 1), (dg, lg, -1)):
        shift = _quotient(lcm, lead)
        scale = sign / src[lead]
        for e, a in src.items():
            t = tuple(x + y for x, y in zip(e, shift))
            out[t] = out.get(t, Fraction(0)) + scale * a
    return ring.to_poly({e: a for e, a in out.items() if a})
