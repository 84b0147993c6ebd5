"""The bialgebra ``C(A)``, its rational points, and abelian-group gradings.

A K-point is an algebra map ``C(A) -> K``, stored as the matrix ``c`` with
``c[s][i]`` the image of ``x_si``.  A bialgebra map ``C(A) -> K[G]`` is
stored as one matrix ``P_g`` per group element with
``x_si -> sum_g P_g[s][i] g``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

import sympy

from .errors import CheckFailure, InputError, RingModeError
from .groebner import Budget, buchberger, normal_form
from .operad import OperadPresentation
from .palgebra import StructureAlgebra, _bind, check_morphism
from .polyring import PLAIN, Polynomial, Var, X, as_rational, poly_eval, poly_substitute
from .universal import UniversalPresentation, eta

Matrix = tuple[tuple[Fraction, ...], ...]
Vector = tuple[Fraction, ...]


# exact matrices --------------------------------------------------------------------

def as_matrix(rows, shape: tuple[int, int] | None = None) -> Matrix:
    try:
        m = tuple(tuple(as_rational(x) for x in row) for row in rows)
    except TypeError as exc:
        raise InputError("a matrix must be a list of rows") from exc
    if any(len(r) != len(m[0]) for r in m) if m else False:
        raise InputError("matrix rows have different lengths")
    if shape is not None and (len(m), len(m[0]) if m else shape[1]) != shape:
        raise InputError(f"matrix must be {shape[0]}x{shape[1]}")
    return m


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(r == c)) for c in range(n)) for r in range(n))


def zero_matrix(n: int) -> Matrix:
    return tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise InputError("matrix sizes do not match")
    cols = len(b[0]) if b else 0
    return tuple(tuple(sum((a[r][k] * b[k][c] for k in range(len(b))), Fraction(0))
                       for c in range(cols)) for r in range(len(a)))


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _to_sympy(m: Matrix | Sequence[Vector], rows: int | None = None, cols: int | None = None):
    if not m:
        return sympy.zeros(rows or 0, cols or 0)
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in m])


def _from_sympy(m) -> Matrix:
    return tuple(tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1]))
                       for x in m.row(r)) for r in range(m.rows))


def mat_inverse(m: Matrix) -> Matrix | None:
    if not m:
        return ()
    sm = _to_sympy(m)
    if sm.det() == 0:
        return None
    return _from_sympy(sm.inv())


def rank(m: Matrix) -> int:
    return _to_sympy(m).rank() if m and m[0] else 0


def column_space(m: Matrix) -> list[Vector]:
    """Pivot columns of ``m``; they form a basis of its column space."""
    if not m:
        return []
    _, pivots = _to_sympy(m).rref()
    return [tuple(m[r][c] for r in range(len(m))) for c in pivots]


def same_span(u: Sequence[Vector], v: Sequence[Vector]) -> bool:
    if not u and not v:
        return True
    if not u or not v:
        return False
    a = _to_sympy([list(x) for x in u]).T
    b = _to_sympy([list(x) for x in v]).T
    ra, rb = a.rank(), b.rank()
    return ra == rb == a.row_join(b).rank()


# bialgebra structure ------------------------------------------------------------------

@dataclass(frozen=True)
class BialgebraStructure:
    n: int
    delta: Mapping[Var, Polynomial]
    counit: Mapping[Var, Fraction]


def _delta_image(n: int, s: int, t: int, left: int, right: int) -> Polynomial:
    acc = Polynomial({}, PLAIN)
    for i in range(1, n + 1):
        acc = acc + Polynomial.var(X(s, i, block=left)) * Polynomial.var(X(i, t, block=right))
    return acc


def bialgebra_structure(presentation: UniversalPresentation) -> BialgebraStructure:
    """``Delta(x_st) = sum_i x'_si x''_it`` and ``eps(x_st) = delta_st``."""
    if presentation.graded:
        raise RingModeError("the bialgebra structure is built in plain mode")
    if presentation.src_dim != presentation.tgt_dim:
        raise InputError("the bialgebra structure needs C(A), i.e. a square grid")
    n = presentation.src_dim
    delta = {X(s, t): _delta_image(n, s, t, 1, 2) for s in range(1, n + 1) for t in range(1, n + 1)}
    counit = {X(s, t): Fraction(int(s == t)) for s in range(1, n + 1) for t in range(1, n + 1)}
    return BialgebraStructure(n, delta, counit)


def _rename(p: Polynomial, block: int) -> Polynomial:
    return poly_substitute(p, {v: Polynomial.var(v._replace(block=block)) for v in p.variables()},
                           PLAIN) if not p.is_zero() else p


@dataclass
class BialgebraReport:
    coassociative: bool
    counital: bool
    counit_failures: list
    coproduct_failures: list
    comodule: bool

    @property
    def passed(self) -> bool:
        return (self.coassociative and self.counital and self.comodule
                and not self.counit_failures and not self.coproduct_failures)


def verify_bialgebra(presentation: UniversalPresentation, bial: BialgebraStructure | None = None,
                     budget: Budget | None = None) -> BialgebraReport:
    """Coassociativity and counit laws, well-definedness on ``J``, and the comodule identity."""
    bial = bial or bialgebra_structure(presentation)
    n = bial.n
    grid = [(s, t) for s in range(1, n + 1) for t in range(1, n + 1)]

    coassociative = True
    counital = True
    for s, t in grid:
        d = bial.delta[X(s, t)]
        left_images = {X(a, b, block=1): _delta_image(n, a, b, 1, 2) for a, b in grid}
        left_images.update({X(a, b, block=2): Polynomial.var(X(a, b, block=3)) for a, b in grid})
        right_images = {X(a, b, block=1): Polynomial.var(X(a, b, block=1)) for a, b in grid}
        right_images.update({X(a, b, block=2): _delta_image(n, a, b, 2, 3) for a, b in grid})
        if poly_substitute(d, left_images, PLAIN) != poly_substitute(d, right_images, PLAIN):
            coassociative = False
        target = Polynomial.var(X(s, t))
        for kept in (1, 2):
            images = {}
            for a, b in grid:
                images[X(a, b, block=kept)] = Polynomial.var(X(a, b))
                images[X(a, b, block=3 - kept)] = Polynomial.constant(bial.counit[X(a, b)])
            if poly_substitute(d, images, PLAIN) != target:
                counital = False

    counit_failures = [t.tag for t in presentation.jgens
                       if poly_eval(t.poly, bial.counit) != 0]

    coproduct_failures = []
    if presentation.jgens:
        gb = presentation.groebner(budget)
        doubled_gens = [_rename(g, 1) for g in gb.basis] + [_rename(g, 2) for g in gb.basis]
        doubled = buchberger(doubled_gens, budget, presentation.order)
        for t in presentation.jgens:
            image = poly_substitute(t.poly, bial.delta, PLAIN)
            if not normal_form(image, doubled, budget).is_zero():
                coproduct_failures.append(t.tag)

    comodule = _comodule_identity(presentation, bial)
    return BialgebraReport(coassociative, counital, counit_failures, coproduct_failures, comodule)


def _comodule_identity(presentation: UniversalPresentation, bial: BialgebraStructure) -> bool:
    """``(eta (x) id) eta = (id (x) Delta) eta`` as symbols, component by component."""
    images = eta(presentation).images
    n = bial.n
    for i in range(1, n + 1):
        left: dict[int, Polynomial] = {}
        for s, coeff in images[i].items():
            # eta(a_s) contributes a_r (x) x'_rs, then (x) x''_si from the outer factor
            for r, inner in images[s].items():
                term = _rename(inner, 1) * _rename(coeff, 2)
                left[r] = left.get(r, Polynomial({}, PLAIN)) + term
        right = {s: poly_substitute(coeff, bial.delta, PLAIN) for s, coeff in images[i].items()}
        keys = set(left) | set(right)
        if any(left.get(k, Polynomial({}, PLAIN)) != right.get(k, Polynomial({}, PLAIN)) for k in keys):
            return False
    return True


# K-points -------------------------------------------------------------------------------

def _assignment(presentation: UniversalPresentation, c: Matrix) -> dict[Var, Fraction]:
    n, m = presentation.src_dim, presentation.tgt_dim
    c = as_matrix(c) if c else ()
    if len(c) != n or any(len(row) != m for row in c):
        raise InputError(f"K-point must be a {n}x{m} matrix")
    return {X(s + 1, i + 1): c[s][i] for s in range(n) for i in range(m)}


def kpoint_violations(presentation: UniversalPresentation, c) -> list:
    if presentation.graded:
        raise RingModeError("K-points are evaluated in plain mode")
    point = _assignment(presentation, c)
    return [t for t in presentation.jgens if poly_eval(t.poly, point) != 0]


def is_kpoint(presentation: UniversalPresentation, c) -> bool:
    return not kpoint_violations(presentation, c)


def convolve(c1, c2) -> Matrix:
    a, b = as_matrix(c1), as_matrix(c2)
    if len(a) != len(b) or (a and len(a[0]) != len(b[0])):
        raise InputError("K-points must have the same size")
    return mat_mul(a, b)


def invert_kpoint(presentation: UniversalPresentation, c) -> Matrix | None:
    """The convolution inverse, if ``c`` is an invertible K-point."""
    c = as_matrix(c)
    if not is_kpoint(presentation, c):
        return None
    inv = mat_inverse(c)
    if inv is None or not is_kpoint(presentation, inv):
        return None
    return inv


def zeta(c) -> Matrix:
    """Endomorphism ``a_i -> sum_j c[j][i] a_j``; its matrix in the basis is ``c`` itself."""
    return as_matrix(c)


@dataclass
class AutomorphismReport:
    violations: list
    inverse: Matrix | None
    zeta_is_morphism: bool

    @property
    def kpoint(self) -> bool:
        return not self.violations

    @property
    def consistent(self) -> bool:
        return self.zeta_is_morphism == self.kpoint

    @property
    def passed(self) -> bool:
        return self.kpoint and self.inverse is not None and self.consistent


def automorphism_report(presentation: UniversalPresentation, alg: StructureAlgebra,
                        pres: OperadPresentation, c) -> AutomorphismReport:
    """K-point test, convolution inverse, and the direct morphism test on ``zeta(c)``."""
    c = as_matrix(c)
    violations = kpoint_violations(presentation, c)
    inverse = invert_kpoint(presentation, c) if not violations else None
    return AutomorphismReport(violations, inverse, check_morphism(zeta(c), alg, alg, pres))


# groups and gradings -------------------------------------------------------------------------

@dataclass(frozen=True)
class AbelianGroup:
    """``Z/m_1 x .. x Z/m_r``; elements are tuples of residues."""

    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(m) for m in self.factors))
        if any(m < 1 for m in self.factors):
            raise InputError("cyclic factors must be positive")

    def elements(self) -> list[tuple[int, ...]]:
        return [tuple(e) for e in product(*(range(m) for m in self.factors))]

    def identity(self) -> tuple[int, ...]:
        return tuple(0 for _ in self.factors)

    def add(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return tuple((x + y) % m for x, y, m in zip(a, b, self.factors))

    def check(self, element) -> tuple[int, ...]:
        e = tuple(int(x) for x in element)
        if len(e) != len(self.factors) or any(not 0 <= x < m for x, m in zip(e, self.factors)):
            raise InputError(f"{element!r} is not an element of Z/{self.factors}")
        return e


@dataclass(frozen=True)
class GroupMorphism:
    group: AbelianGroup
    projections: Mapping[tuple[int, ...], Matrix]

    def matrix(self, element) -> Matrix | None:
        return self.projections.get(tuple(element))


@dataclass(frozen=True)
class Grading:
    group: AbelianGroup
    components: Mapping[tuple[int, ...], tuple[Vector, ...]]

    def basis_matrix(self) -> tuple[Matrix, list[tuple[int, ...]]]:
        """Columns are all component vectors, grouped by element in group order."""
        columns: list[Vector] = []
        owners: list[tuple[int, ...]] = []
        for g in self.group.elements():
            for v in self.components.get(g, ()):
                columns.append(v)
                owners.append(g)
        n = len(columns[0]) if columns else 0
        return tuple(tuple(columns[c][r] for c in range(len(columns))) for r in range(n)), owners


def make_grading(group: AbelianGroup, components: Mapping, n: int) -> Grading:
    comps = {}
    for g, vectors in components.items():
        elem = group.check(g)
        vecs = tuple(tuple(as_rational(x) for x in v) for v in vectors)
        if any(len(v) != n for v in vecs):
            raise InputError(f"component vectors must have length {n}")
        comps[elem] = comps.get(elem, ()) + vecs
    return Grading(group, comps)


def _projections(grading: Grading, n: int) -> dict[tuple[int, ...], Matrix]:
    basis, owners = grading.basis_matrix()
    if len(owners) != n or (n and rank(basis) != n):
        raise InputError("grading components do not form a direct-sum basis")
    if n == 0:
        return {g: () for g in grading.group.elements()}
    inv = mat_inverse(basis)
    out = {}
    for g in grading.group.elements():
        select = tuple(tuple(Fraction(int(r == c and owners[c] == g)) for c in range(n)) for r in range(n))
        out[g] = mat_mul(mat_mul(basis, select), inv)
    return out


def _apply_operation(tensor, vectors: Sequence[Vector], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for inputs, vec in tensor.entries.items():
        coeff = Fraction(1)
        for v, j in zip(vectors, inputs):
            coeff *= v[j]
            if not coeff:
                break
        if coeff:
            for s, c in vec.items():
                out[s] += coeff * c
    return out


def check_grading(alg: StructureAlgebra, pres: OperadPresentation, grading: Grading) -> bool:
    """True iff every generator maps homogeneous inputs into the product component."""
    return not grading_violations(alg, pres, grading)


def grading_violations(alg: StructureAlgebra, pres: OperadPresentation, grading: Grading) -> list:
    if alg.graded:
        raise RingModeError("group gradings are checked on ungraded algebras")
    n = alg.dim
    projections = _projections(grading, n)
    tensors = _bind(alg, pres)
    homogeneous = [(g, v) for g in grading.group.elements() for v in grading.components.get(g, ())]
    bad = []
    for spec, t in zip(pres.generators, tensors):
        for combo in product(range(len(homogeneous)), repeat=spec.arity):
            degree = grading.group.identity()
            for k in combo:
                degree = grading.group.add(degree, homogeneous[k][0])
            w = _apply_operation(t, [homogeneous[k][1] for k in combo], n)
            proj = projections[degree]
            image = [sum((proj[r][c] * w[c] for c in range(n)), Fraction(0)) for r in range(n)]
            if image != w:
                bad.append((spec.name, combo))
    return bad


def grading_to_morphism(alg: StructureAlgebra, pres: OperadPresentation, grading: Grading) -> GroupMorphism:
    """Projections onto the components along the others."""
    if not check_grading(alg, pres, grading):
        raise CheckFailure("the decomposition is not a grading of the algebra")
    return GroupMorphism(grading.group, _projections(grading, alg.dim))


@dataclass
class MorphismReport:
    failures: list[tuple]

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_group_morphism(presentation: UniversalPresentation, m: GroupMorphism) -> MorphismReport:
    """Counit, comultiplicativity and algebra-map conditions for ``C(A) -> K[G]``."""
    if presentation.graded:
        raise RingModeError("group morphisms are checked in plain mode")
    n = presentation.src_dim
    group = m.group
    elements = group.elements()
    proj = {}
    for g in elements:
        p = m.projections.get(g)
        proj[g] = zero_matrix(n) if p is None else as_matrix(p, (n, n)) if n else ()
    for g in m.projections:
        group.check(g)
    failures: list[tuple] = []
    total = zero_matrix(n)
    for g in elements:
        total = mat_add(total, proj[g]) if n else ()
    if n and total != identity_matrix(n):
        failures.append(("sum", "projections do not sum to the identity"))
    for g in elements:
        for h in elements:
            product_gh = mat_mul(proj[g], proj[h]) if n else ()
            expected = proj[g] if g == h else zero_matrix(n) if n else ()
            if product_gh != expected:
                failures.append(("orthogonal", g, h))
    # substitute x_si -> sum_g P_g[s][i] g into K[G]
    images = {}
    for s in range(1, n + 1):
        for i in range(1, n + 1):
            images[X(s, i)] = {g: proj[g][s - 1][i - 1] for g in elements if proj[g][s - 1][i - 1]}
    for t in presentation.jgens:
        value = _group_algebra_eval(t.poly, images, group)
        for g in elements:
            if value.get(g, 0):
                failures.append(("ideal", t.tag, g))
    return MorphismReport(failures)


def _group_algebra_eval(p: Polynomial, images, group: AbelianGroup) -> dict:
    total: dict = {}
    unit = group.identity()
    for mono, c in p.terms.items():
        value = {unit: c}
        for v, e in mono:
            for _ in range(e):
                nxt: dict = {}
                for a, x in value.items():
                    for b, y in images[v].items():
                        k = group.add(a, b)
                        nxt[k] = nxt.get(k, Fraction(0)) + x * y
                value = {k: x for k, x in nxt.items() if x}
        for k, x in value.items():
            total[k] = total.get(k, Fraction(0)) + x
    return {k: x for k, x in total.items() if x}


def morphism_to_grading(presentation: UniversalPresentation, m: GroupMorphism) -> Grading:
    """Components are the column spaces of the projections."""
    report = verify_group_morphism(presentation, m)
    if not report.passed:
        raise CheckFailure("the matrices do not define a bialgebra map to the group algebra")
    comps = {}
    for g in m.group.elements():
        p = m.projections.get(g)
        if p:
            basis = column_space(as_matrix(p))
            if basis:
                comps[g] = tuple(basis)
    return Grading(m.group, comps)


def conjugate(m: GroupMorphism, g, presentation: UniversalPresentation | None = None) -> GroupMorphism:
    """``g * Phi * g^-1``: every projection becomes ``U P U^-1``."""
    u = as_matrix(g)
    if presentation is not None:
        inv = invert_kpoint(presentation, u)
        if inv is None:
            raise CheckFailure("the conjugating matrix is not an invertible K-point")
    else:
        inv = mat_inverse(u)
        if inv is None:
            raise CheckFailure("the conjugating matrix is singular")
    return GroupMorphism(m.group, {e: mat_mul(mat_mul(u, p), inv) for e, p in m.projections.items()})


# JSON ---------------------------------------------------------------------------------------

def matrix_to_json(m: Matrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in m]


def element_key(e: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in e) + ")"


def parse_element(key: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in key.strip("()[] ").split(",") if x.strip())
    except ValueError as exc:
        raise InputError(f"bad group element {key!r}") from exc


def group_from_json(data) -> AbelianGroup:
    try:
        return AbelianGroup(tuple(data["factors"]))
    except (KeyError, TypeError) as exc:
        raise InputError("a group needs a 'factors' list") from exc


def morphism_to_json(m: GroupMorphism) -> dict:
    return {"group": {"factors": list(m.group.factors)},
            "projections": {element_key(g): matrix_to_json(p)
                            for g, p in sorted(m.projections.items())}}


def morphism_from_json(data) -> GroupMorphism:
    try:
        group = group_from_json(data["group"])
        projections = {group.check(parse_element(k)): as_matrix(v)
                       for k, v in data["projections"].items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed morphism file: {exc}") from exc
    return GroupMorphism(group, projections)


def grading_to_json(grading: Grading) -> dict:
    return {"group": {"factors": list(grading.group.factors)},
            "components": {element_key(g): [[str(x) for x in v] for v in vs]
                           for g, vs in sorted(grading.components.items())}}


def grading_from_json(data, n: int) -> Grading:
    try:
        group = group_from_json(data["group"])
        comps = {parse_element(k): v for k, v in data["components"].items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed grading file: {exc}") from exc
    return make_grading(group, comps, n)
