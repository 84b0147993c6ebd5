"""Universal polynomials, the coaction map and machine checks of their properties.

For algebras ``A`` (rows ``s``) and ``B`` (columns ``i``) the polynomial
attached to a generating operation ``mu``, an output index ``a`` and an input
tuple ``(i_1..i_k)`` of ``B`` is

    sum_u beta^u_{mu,i} X[a][u]  -  sum_s alpha^a_{mu,s} X[s_1][i_1] ... X[s_k][i_k].

In the graded setting the variables carry a cohomological degree and one
polynomial is emitted per output degree ``omega``; see
``graded_universal_polynomials``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import AxiomFailure, InputError, RingModeError
from .groebner import Budget, GroebnerBasis, Ideal, buchberger, normal_form
from .operad import OperadPresentation, composite_basis, format_tree
from .palgebra import StructureAlgebra, StructureTensor, _bind, check_axioms, eval_tree
from .polyring import (DEGREVLEX, GRADED, MONOMIAL_ORDERS, PLAIN, Polynomial, Var, X,
                       poly_from_json, poly_to_json, zero)


@dataclass(frozen=True)
class JTag:
    """Provenance of a generator of the ideal: operation, output index, inputs, output degree."""

    gen: str
    a: int
    inputs: tuple
    omega: int | None = None


@dataclass(frozen=True)
class TaggedPolynomial:
    poly: Polynomial
    tag: JTag
    degenerate: bool = False


@dataclass
class UniversalPresentation:
    """Generators of the ideal ``J`` over the grid ``X[s][i]`` (``s <= src_dim``, ``i <= tgt_dim``)."""

    src_dim: int
    tgt_dim: int
    graded: bool
    jgens: tuple[TaggedPolynomial, ...]
    order: str = DEGREVLEX
    dims: tuple[int, ...] | None = None
    dropped_zero: int = 0
    _gb: GroebnerBasis | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.order not in MONOMIAL_ORDERS:
            raise InputError(f"unknown monomial order {self.order!r}")

    @property
    def polynomials(self) -> list[Polynomial]:
        return [t.poly for t in self.jgens]

    @property
    def mode(self) -> str:
        return GRADED if self.graded else PLAIN

    def variables(self) -> list[Var]:
        """The grid variables of the (plain) polynomial ring."""
        if self.graded:
            raise RingModeError("the graded grid is infinite; use the jgens' variables")
        return [X(s, i) for s in range(1, self.src_dim + 1) for i in range(1, self.tgt_dim + 1)]

    def groebner(self, budget: Budget | None = None) -> GroebnerBasis:
        if self.graded:
            raise RingModeError("Groebner bases are only computed in plain mode")
        if self._gb is None:
            self._gb = buchberger(Ideal(self.polynomials, self.order), budget)
        return self._gb

    def lookup(self) -> dict[JTag, Polynomial]:
        return {t.tag: t.poly for t in self.jgens}


# generation -------------------------------------------------------------------------

def _sparse_by_output(t: StructureTensor) -> dict[int, list[tuple[tuple[int, ...], Fraction]]]:
    out: dict[int, list] = {}
    for inputs, vec in sorted(t.entries.items()):
        for s, c in sorted(vec.items()):
            out.setdefault(s, []).append((inputs, c))
    return out


def _ungraded_polynomial(beta: Mapping[int, Fraction], alpha_rows, a: int,
                         inputs: Sequence[int]) -> Polynomial:
    terms = [(c, [(X(a + 1, u + 1), 1)]) for u, c in sorted(beta.items())]
    for s_tuple, c in alpha_rows:
        terms.append((-c, [(X(s + 1, i + 1), 1) for s, i in zip(s_tuple, inputs)]))
    return Polynomial.from_terms(terms, PLAIN)


def universal_polynomials(alg_a: StructureAlgebra, alg_b: StructureAlgebra | None,
                          pres: OperadPresentation, order: str = DEGREVLEX,
                          check: bool = True) -> UniversalPresentation:
    """Generators of ``J`` for ``C(A, B)``; ``alg_b=None`` means ``B = A``."""
    alg_b = alg_a if alg_b is None else alg_b
    if alg_a.graded or alg_b.graded:
        if alg_b is not alg_a:
            raise InputError("graded universal polynomials are only defined for C(A)")
        return graded_universal_polynomials(alg_a, pres, order, check)
    if check:
        _require_axioms(alg_a, pres)
        if alg_b is not alg_a:
            _require_axioms(alg_b, pres)
    tensors_a = _bind(alg_a, pres)
    tensors_b = _bind(alg_b, pres)
    n, m = alg_a.dim, alg_b.dim
    jgens: list[TaggedPolynomial] = []
    dropped = 0
    for g, ta, tb in zip(pres.generators, tensors_a, tensors_b):
        rows = _sparse_by_output(ta)
        for a in range(n):
            for inputs in product(range(m), repeat=g.arity):
                p = _ungraded_polynomial(tb.entries.get(inputs, {}), rows.get(a, ()), a, inputs)
                if p.is_zero():
                    dropped += 1
                    continue
                tag = JTag(g.name, a + 1, tuple(i + 1 for i in inputs))
                jgens.append(TaggedPolynomial(p, tag))
    return UniversalPresentation(n, m, False, tuple(jgens), order, None, dropped)


def _require_axioms(alg: StructureAlgebra, pres: OperadPresentation) -> None:
    report = check_axioms(alg, pres)
    if not report.passed:
        raise AxiomFailure(f"algebra {alg.name!r} does not satisfy the relations of {pres.name!r}")


def koszul_exponent(eps: Sequence[int], p: Sequence[int]) -> int:
    """``sum_j (eps_{j+1} + .. + eps_k) * (p_j - eps_j)``."""
    total = 0
    for j in range(len(p) - 1):
        total += sum(eps[j + 1:]) * (p[j] - eps[j])
    return total


def _compositions(total: int, caps: Sequence[int], allowed) -> Iterable[tuple[int, ...]]:
    """Tuples ``eps`` with ``sum(eps) = total``, ``0 <= eps_r <= caps[r]`` and ``allowed(eps_r)``."""
    def rec(r: int, remaining: int):
        if r == len(caps):
            if remaining == 0:
                yield ()
            return
        for e in range(min(caps[r], remaining) + 1):
            if allowed(e):
                for rest in rec(r + 1, remaining - e):
                    yield (e,) + rest
    yield from rec(0, total)


def graded_universal_polynomials(alg: StructureAlgebra, pres: OperadPresentation,
                                 order: str = DEGREVLEX, check: bool = True) -> UniversalPresentation:
    """Generators of ``J`` for the graded universal algebra, one per output degree ``omega``."""
    if not alg.graded:
        raise InputError("graded universal polynomials need a graded algebra")
    if check:
        _require_axioms(alg, pres)
    tensors = _bind(alg, pres)
    dims = alg.dims

    def d(p: int) -> int:
        return dims[p] if 0 <= p < len(dims) else 0

    def glob(p: int, i: int) -> int:
        return alg.offsets[p] + i

    present = [p for p in range(len(dims)) if dims[p]]
    jgens: list[TaggedPolynomial] = []
    dropped = 0
    for g, t in zip(pres.generators, tensors):
        for degs in product(present, repeat=g.arity):
            theta = sum(degs) + g.cdeg
            for omega in range(theta + 1):
                out_degree = theta - omega
                eps_list = list(_compositions(out_degree - g.cdeg, degs, lambda e: d(e) > 0)) \
                    if out_degree >= g.cdeg else []
                for a in range(d(out_degree)):
                    for idx in product(*(range(d(p)) for p in degs)):
                        inputs = tuple(glob(p, i) for p, i in zip(degs, idx))
                        terms = []
                        for u_glob, c in sorted(t.entries.get(inputs, {}).items()):
                            u = u_glob - alg.offsets[theta]
                            terms.append((c, [(X(a + 1, u + 1, omega), 1)]))
                        for eps in eps_list:
                            sign = -1 if koszul_exponent(eps, degs) % 2 else 1
                            for s_idx in product(*(range(d(e)) for e in eps)):
                                key = tuple(glob(e, s) for e, s in zip(eps, s_idx))
                                c = t.entries.get(key, {}).get(glob(out_degree, a))
                                if not c:
                                    continue
                                factors = [(X(s + 1, i + 1, p - e), 1)
                                           for s, i, p, e in zip(s_idx, idx, degs, eps)]
                                terms.append((-sign * c, factors))
                        poly = Polynomial.from_terms(terms, GRADED)
                        if poly.is_zero():
                            dropped += 1
                            continue
                        tag = JTag(g.name, a + 1,
                                   tuple((p, i + 1) for p, i in zip(degs, idx)), omega)
                        jgens.append(TaggedPolynomial(poly, tag, degenerate=omega > theta - g.cdeg))
    return UniversalPresentation(alg.dim, alg.dim, True, tuple(jgens), order, tuple(dims), dropped)


# the coaction ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EtaMap:
    """``images[i]`` maps a source basis label to the polynomial coefficient of that basis vector."""

    images: Mapping[object, Mapping[object, Polynomial]]
    graded: bool


def eta(presentation: UniversalPresentation) -> EtaMap:
    """``b_i -> sum_s a_s (x) x_si``; graded: ``a_pi -> sum_{eps,s} a_{eps s} (x) x^(p-eps)_si``."""
    if not presentation.graded:
        images = {
            i: {s: Polynomial.var(X(s, i)) for s in range(1, presentation.src_dim + 1)}
            for i in range(1, presentation.tgt_dim + 1)
        }
        return EtaMap(images, False)
    dims = presentation.dims
    images = {}
    for p, dp in enumerate(dims):
        for i in range(1, dp + 1):
            images[(p, i)] = {
                (e, s): Polynomial.var(X(s, i, p - e), GRADED)
                for e in range(p + 1) for s in range(1, dims[e] + 1)
            }
    return EtaMap(images, True)


@dataclass
class EtaReport:
    failures: list[tuple]
    checked: int
    mode: str

    @property
    def passed(self) -> bool:
        return not self.failures


def _eta_vector(alg: StructureAlgebra, images: Mapping, label) -> dict[int, Polynomial]:
    """``eta(basis element)`` as a map from global source index to polynomial."""
    return {alg.basis_index(src): poly for src, poly in images[label].items()}


def _gamma_bar(alg: StructureAlgebra, t: StructureTensor, vectors: Sequence[Mapping[int, Polynomial]],
               mode: str) -> dict[int, Polynomial]:
    """Apply an operation of ``A`` to ``A (x) C``-valued arguments with the Koszul rule."""
    out: dict[int, Polynomial] = {}
    degrees = alg.degrees
    for picks in product(*(sorted(v.items()) for v in vectors)):
        key = tuple(j for j, _ in picks)
        image = t.entries.get(key)
        if not image:
            continue
        # moving c_j past a_{j+1} .. a_k
        exponent = 0
        for j in range(len(picks)):
            cdeg = _poly_cdeg(picks[j][1])
            exponent += cdeg * sum(degrees[x] for x in key[j + 1:])
        coeff = picks[0][1] if picks else Polynomial.constant(1, mode)
        for _, poly in picks[1:]:
            coeff = coeff * poly
        if exponent % 2:
            coeff = -coeff
        for s, c in image.items():
            out[s] = out.get(s, zero(mode)) + coeff.scale(c)
    return {s: p for s, p in out.items() if not p.is_zero()}


def _poly_cdeg(p: Polynomial) -> int:
    degrees = p.cdegs()
    if len(degrees) > 1:
        raise InputError("eta images must be homogeneous")
    return degrees.pop() if degrees else 0


def verify_eta_morphism(alg_a: StructureAlgebra, alg_b: StructureAlgebra | None,
                        pres: OperadPresentation, presentation: UniversalPresentation,
                        budget: Budget | None = None) -> EtaReport:
    """Check ``eta(mu(b..)) = mu_bar(eta(b)..)`` for every generator and basis tuple.

    Plain mode compares modulo ``J`` by Groebner normal forms.  Graded mode
    checks that each component difference is exactly the tagged generator of
    ``J`` (or zero where that generator vanished identically).
    """
    alg_b = alg_a if alg_b is None else alg_b
    if (alg_a.dim, alg_b.dim) != (presentation.src_dim, presentation.tgt_dim):
        raise InputError("presentation does not match the algebra dimensions")
    if presentation.graded != alg_a.graded:
        raise InputError("presentation and algebra disagree on grading")
    mode = presentation.mode
    eta_map = eta(presentation)
    tensors_a = _bind(alg_a, pres)
    tensors_b = _bind(alg_b, pres)
    failures: list[tuple] = []
    checked = 0
    if not presentation.graded:
        gb = presentation.groebner(budget)
        for g, ta, tb in zip(pres.generators, tensors_a, tensors_b):
            for inputs in product(range(alg_b.dim), repeat=g.arity):
                labels = tuple(alg_b.basis_label(i) for i in inputs)
                rhs = _gamma_bar(alg_a, ta, [_eta_vector(alg_a, eta_map.images, l) for l in labels], mode)
                lhs = _apply_eta(alg_a, alg_b, eta_map, tb.entries.get(inputs, {}), mode)
                for a in range(alg_a.dim):
                    checked += 1
                    diff = lhs.get(a, zero(mode)) - rhs.get(a, zero(mode))
                    if not normal_form(diff, gb, budget).is_zero():
                        failures.append((g.name, a + 1, tuple(i + 1 for i in inputs)))
        return EtaReport(failures, checked, mode)

    expected = presentation.lookup()
    for g, t in zip(pres.generators, tensors_a):
        for inputs in product(range(alg_a.dim), repeat=g.arity):
            labels = tuple(alg_a.basis_label(i) for i in inputs)
            theta = sum(p for p, _ in labels) + g.cdeg
            lhs = _gamma_bar(alg_a, t, [_eta_vector(alg_a, eta_map.images, l) for l in labels], mode)
            rhs = _apply_eta(alg_a, alg_a, eta_map, t.entries.get(inputs, {}), mode)
            for r in range(alg_a.dim):
                checked += 1
                lam, a = alg_a.basis_label(r)
                diff = rhs.get(r, zero(mode)) - lhs.get(r, zero(mode))
                tag = JTag(g.name, a, labels, theta - lam)
                if theta - lam < 0:
                    ok = diff.is_zero()
                else:
                    ok = diff == expected.get(tag, zero(mode))
                if not ok:
                    failures.append((g.name, a, labels, theta - lam))
    return EtaReport(failures, checked, mode)


def _apply_eta(alg_a: StructureAlgebra, alg_b: StructureAlgebra, eta_map: EtaMap,
               vec: Mapping[int, Fraction], mode: str) -> dict[int, Polynomial]:
    out: dict[int, Polynomial] = {}
    for u, c in vec.items():
        for j, poly in _eta_vector(alg_a, eta_map.images, alg_b.basis_label(u)).items():
            out[j] = out.get(j, zero(mode)) + poly.scale(c)
    return {j: p for j, p in out.items() if not p.is_zero()}


# generation check -------------------------------------------------------------------------

@dataclass
class GenerationReport:
    non_members: list[tuple[str, int, tuple]]
    composites: int
    polynomials: int
    distinct: int

    @property
    def passed(self) -> bool:
        return not self.non_members


def composite_polynomials(alg: StructureAlgebra, tensor: StructureTensor) -> Iterable[tuple[int, tuple, Polynomial]]:
    """Universal polynomials of an arbitrary operation of ``alg`` (given by its tensor)."""
    rows = _sparse_by_output(tensor)
    for a in range(alg.dim):
        for inputs in product(range(alg.dim), repeat=tensor.arity):
            p = _ungraded_polynomial(tensor.entries.get(inputs, {}), rows.get(a, ()), a, inputs)
            yield a, inputs, p


def verify_generation(alg: StructureAlgebra, pres: OperadPresentation,
                      presentation: UniversalPresentation, max_arity: int,
                      budget: Budget | None = None) -> GenerationReport:
    """Check that the polynomials of every composite tree monomial lie in ``J``."""
    if presentation.graded or alg.graded:
        raise RingModeError("the generation check runs in plain mode only")
    min_arity = min((g.arity for g in pres.generators), default=1)
    if max_arity < max((g.arity for g in pres.generators), default=1):
        raise InputError("max_arity must be at least the largest generator arity")
    gb = presentation.groebner(budget)
    first_seen: dict[Polynomial, tuple[str, int, tuple]] = {}
    composites = 0
    total = 0
    for arity in range(max(min_arity, 2), max_arity + 1):
        for elem in composite_basis(pres, arity, bound=max_arity):
            composites += 1
            tree = next(iter(elem.terms))
            tensor = eval_tree(alg, elem, pres)
            for a, inputs, p in composite_polynomials(alg, tensor):
                total += 1
                if not p.is_zero() and p not in first_seen:
                    first_seen[p] = (format_tree(pres.signature, tree), a + 1,
                                     tuple(i + 1 for i in inputs))
    bad = [where for p, where in first_seen.items() if not normal_form(p, gb, budget).is_zero()]
    bad.sort()
    return GenerationReport(bad, composites, total, len(first_seen))


# JSON -------------------------------------------------------------------------------

def _inputs_to_json(inputs: tuple):
    return [list(x) if isinstance(x, tuple) else x for x in inputs]


def presentation_to_json(pres: UniversalPresentation) -> dict:
    jgens = []
    for t in pres.jgens:
        tag = {"gen": t.tag.gen, "a": t.tag.a, "inputs": _inputs_to_json(t.tag.inputs)}
        if t.tag.omega is not None:
            tag["omega"] = t.tag.omega
        entry = {"tag": tag, "poly": poly_to_json(t.poly, pres.order)}
        if t.degenerate:
            entry["degenerate"] = True
        jgens.append(entry)
    data = {"src_dim": pres.src_dim, "tgt_dim": pres.tgt_dim, "graded": pres.graded,
            "order": pres.order}
    if pres.dims is not None:
        data["dims"] = list(pres.dims)
    data["dropped_zero"] = pres.dropped_zero
    data["jgens"] = jgens
    return data


def presentation_from_json(data: Mapping) -> UniversalPresentation:
    try:
        graded_flag = bool(data.get("graded", False))
        mode = GRADED if graded_flag else PLAIN
        jgens = []
        for entry in data["jgens"]:
            tag = entry["tag"]
            inputs = tuple(tuple(int(y) for y in x) if isinstance(x, list) else int(x)
                           for x in tag["inputs"])
            omega = tag.get("omega")
            jgens.append(TaggedPolynomial(
                poly_from_json(entry["poly"], mode),
                JTag(str(tag["gen"]), int(tag["a"]), inputs, None if omega is None else int(omega)),
                bool(entry.get("degenerate", False))))
        dims = data.get("dims")
        return UniversalPresentation(
            int(data["src_dim"]), int(data["tgt_dim"]), graded_flag, tuple(jgens),
            str(data.get("order", DEGREVLEX)), None if dims is None else tuple(int(d) for d in dims),
            int(data.get("dropped_zero", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed presentation file: {exc}") from exc
