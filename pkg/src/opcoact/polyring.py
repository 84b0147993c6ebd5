"""Sparse multivariate polynomials over the rationals.

Two ring modes exist.  In ``plain`` mode the variables commute.  In
``graded`` mode a variable carries a cohomological degree ``pi``; variables
of odd degree anticommute with each other and square to zero, while
even-degree variables are central.

Variables are ``Var(block, s, i, pi)``.  Block 0 hosts the grid ``X[s][i]``;
blocks 1 and 2 host the primed copies used for coproduct checks.  The total
order on variables is lexicographic on ``(block, pi, s, i)`` and the
smallest variable in that order is the *largest* one for monomial orders
(``X[1][1] > X[1][2] > ...``).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import InputError, RingModeError

PLAIN = "plain"
GRADED = "graded"

DEGREVLEX = "degrevlex"
LEX = "lex"
MONOMIAL_ORDERS = (DEGREVLEX, LEX)


class Var(NamedTuple):
    block: int
    s: int
    i: int
    pi: int = 0

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.block, self.pi, self.s, self.i)

    @property
    def odd(self) -> bool:
        return self.pi % 2 == 1


def X(s: int, i: int, pi: int = 0, block: int = 0) -> Var:
    """Grid variable with 1-based row ``s`` and column ``i``."""
    return Var(block, s, i, pi)


# A monomial is a tuple of (Var, exponent) pairs sorted by ``Var.key``.
Monomial = tuple[tuple[Var, int], ...]
ONE: Monomial = ()


def as_rational(value) -> Fraction:
    """Convert ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {value!r}") from exc
    raise InputError(f"not an exact rational: {value!r}")


def rational_str(value: Fraction) -> str:
    return str(value)


def mono_mul(m1: Monomial, m2: Monomial, graded: bool) -> tuple[int, Monomial]:
    """Multiply monomials; returns ``(sign, monomial)`` with sign 0 for a vanishing product.

    In graded mode the sign counts transpositions of odd variables needed to
    sort the concatenation ``m1 m2``.
    """
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    sign = 1
    if graded:
        odd1 = [v.key for v, _ in m1 if v.odd]
        if odd1:
            for v, _ in m2:
                if v.odd:
                    k = v.key
                    # each odd variable of m1 that sorts after v must hop over it
                    crossings = 0
                    for k1 in odd1:
                        if k1 == k:
                            return 0, ONE
                        if k1 > k:
                            crossings += 1
                    if crossings % 2:
                        sign = -sign
    merged: dict[Var, int] = dict(m1)
    for v, e in m2:
        merged[v] = merged.get(v, 0) + e
    return sign, tuple(sorted(merged.items(), key=lambda ve: ve[0].key))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_cdeg(m: Monomial) -> int:
    return sum(v.pi * e for v, e in m)


def _neg_key(v: Var) -> tuple[int, int, int, int]:
    return tuple(-x for x in v.key)  # type: ignore[return-value]


def mono_sort_key(m: Monomial, order: str = DEGREVLEX):
    """Sort key under which larger monomials compare greater."""
    if order == DEGREVLEX:
        return (mono_degree(m), tuple((_neg_key(v), -e) for v, e in reversed(m)))
    if order == LEX:
        return tuple((_neg_key(v), e) for v, e in m)
    raise InputError(f"unknown monomial order {order!r}")


class Polynomial:
    """Immutable sparse polynomial: a map from canonical monomials to nonzero rationals."""

    __slots__ = ("_terms", "_mode", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None, mode: str = PLAIN):
        if mode not in (PLAIN, GRADED):
            raise RingModeError(f"unknown ring mode {mode!r}")
        self._mode = mode
        self._terms = {m: c for m, c in (terms or {}).items() if c}
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def constant(cls, c, mode: str = PLAIN) -> "Polynomial":
        return cls({ONE: as_rational(c)}, mode)

    @classmethod
    def var(cls, v: Var, mode: str = PLAIN) -> "Polynomial":
        if mode == PLAIN and v.pi:
            raise RingModeError("variables with nonzero degree need graded mode")
        return cls({((v, 1),): Fraction(1)}, mode)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[object, Iterable[tuple[Var, int]]]],
                   mode: str = PLAIN) -> "Polynomial":
        """Build from ``(coeff, [(var, exp), ...])`` pairs given in any factor order."""
        graded = mode == GRADED
        acc: dict[Monomial, Fraction] = {}
        for coeff, factors in terms:
            c = as_rational(coeff)
            sign, mono = 1, ONE
            for v, e in factors:
                if e < 0:
                    raise InputError("negative exponent")
                if mode == PLAIN and v.pi:
                    raise RingModeError("variables with nonzero degree need graded mode")
                for _ in range(e):
                    s, mono = mono_mul(mono, ((v, 1),), graded)
                    sign *= s
            if sign:
                acc[mono] = acc.get(mono, Fraction(0)) + sign * c
        return cls(acc, mode)

    # inspection -------------------------------------------------------
    @property
    def mode(self) -> str:
        return self._mode

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def variables(self) -> set[Var]:
        return {v for m in self._terms for v, _ in m}

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self._terms), default=-1)

    def cdegs(self) -> set[int]:
        return {mono_cdeg(m) for m in self._terms}

    def sorted_terms(self, order: str = DEGREVLEX) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending monomial order."""
        return sorted(self._terms.items(), key=lambda mc: mono_sort_key(mc[0], order), reverse=True)

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(m, Fraction(0))

    # arithmetic -------------------------------------------------------
    def _check(self, other: "Polynomial") -> None:
        if self._mode != other._mode:
            raise RingModeError(f"ring mode mismatch: {self._mode} vs {other._mode}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(other, self._mode)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = acc.get(m, Fraction(0)) + c
        return Polynomial(acc, self._mode)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self._terms.items()}, self._mode)

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        c = as_rational(c)
        return Polynomial({m: c * a for m, a in self._terms.items()}, self._mode)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        graded = self._mode == GRADED
        acc: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                sign, m = mono_mul(m1, m2, graded)
                if sign:
                    acc[m] = acc.get(m, Fraction(0)) + sign * c1 * c2
        return Polynomial(acc, self._mode)

    def __rmul__(self, other) -> "Polynomial":
        return self.scale(other)

    def __pow__(self, e: int) -> "Polynomial":
        result = Polynomial.constant(1, self._mode)
        for _ in range(e):
            result = result * self
        return result

    # comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._mode == other._mode and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({ONE: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._mode, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({format_text(self)!r}, mode={self._mode!r})"

    def __str__(self) -> str:
        return format_text(self)


def zero(mode: str = PLAIN) -> Polynomial:
    return Polynomial({}, mode)


def one(mode: str = PLAIN) -> Polynomial:
    return Polynomial.constant(1, mode)


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def poly_eval(p: Polynomial, assignment: Mapping[Var, object]) -> Fraction:
    """Evaluate a plain polynomial at a rational point."""
    if p.mode != PLAIN:
        raise RingModeError("evaluation at rational points is only defined in plain mode")
    total = Fraction(0)
    for m, c in p.terms.items():
        value = c
        for v, e in m:
            if v not in assignment:
                raise InputError(f"assignment is missing variable {format_var(v)}")
            value *= as_rational(assignment[v]) ** e
        total += value
    return total


def poly_substitute(p: Polynomial, images: Mapping[Var, Polynomial],
                    mode: str | None = None) -> Polynomial:
    """Extend ``images`` to a ring morphism and apply it to ``p``."""
    modes = {q.mode for q in images.values()}
    if mode is None:
        mode = modes.pop() if len(modes) == 1 else p.mode
    if any(q.mode != mode for q in images.values()):
        raise RingModeError("substitution images must share one ring mode")
    powers: dict[tuple[Var, int], Polynomial] = {}
    result = zero(mode)
    for m, c in p.terms.items():
        term = Polynomial.constant(c, mode)
        for v, e in m:
            if v not in images:
                raise InputError(f"substitution is missing an image for {format_var(v)}")
            if (v, e) not in powers:
                powers[(v, e)] = images[v] ** e
            term = term * powers[(v, e)]
        result = result + term
    return result


# text and JSON ---------------------------------------------------------

def format_var(v: Var) -> str:
    prime = "'" * v.block
    degree = f"({v.pi})" if v.pi else ""
    return f"X{prime}{degree}[{v.s}][{v.i}]"


def format_monomial(m: Monomial) -> str:
    return "*".join(format_var(v) + (f"^{e}" if e > 1 else "") for v, e in m)


def format_text(p: Polynomial, order: str = DEGREVLEX) -> str:
    if p.is_zero():
        return "0"
    out = []
    for idx, (m, c) in enumerate(p.sorted_terms(order)):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not m:
            body = str(mag)
        elif mag == 1:
            body = format_monomial(m)
        else:
            body = f"{mag}*{format_monomial(m)}"
        if idx == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def poly_to_json(p: Polynomial, order: str = DEGREVLEX) -> list[dict]:
    return [
        {"coeff": rational_str(c), "vars": [[v.block, v.s, v.i, v.pi, e] for v, e in m]}
        for m, c in p.sorted_terms(order)
    ]


def poly_from_json(data, mode: str | None = None) -> Polynomial:
    if not isinstance(data, list):
        raise InputError("a polynomial must be a JSON list of terms")
    terms = []
    saw_odd_degree = False
    for term in data:
        try:
            coeff = term["coeff"]
            factors = []
            for entry in term["vars"]:
                block, s, i, pi, e = (int(x) for x in entry)
                if min(s, i) < 1 or min(block, pi) < 0 or e < 1:
                    raise InputError(f"bad variable entry {entry!r}")
                saw_odd_degree = saw_odd_degree or pi > 0
                factors.append((Var(block, s, i, pi), e))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad polynomial term {term!r}") from exc
        terms.append((coeff, factors))
    if mode is None:
        mode = GRADED if saw_odd_degree else PLAIN
    return Polynomial.from_terms(terms, mode)
