from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from opcoact import operad as op
from opcoact import permutations as perms
from opcoact import presets
from opcoact.errors import InputError

# symmetry of each binary generator under the swap, per ungraded preset (None: no symmetry)
SYMMETRY = {
    "ass": {"mu": None},
    "com": {"mu": 1},
    "lie": {"c": -1},
    "pois": {"c": -1, "mu": 1},
    "leib": {"mu": None},
}
UNGRADED = tuple(SYMMETRY)
KARY = {"tass", "pass", "klie", "kleib"}
ALL = UNGRADED + ("gerst", "gradedlie", "zinb", "prelie")

# --- expression oracle (ungraded) -------------------------------------------------


def _norm_node(name, kids, symmetry):
    """A node over normalized child expressions, as {expr: coeff}."""
    out = {}

    def rec(pos, chosen, coeff):
        if pos == len(kids):
            args = list(chosen)
            sign = 1
            sym = symmetry[name]
            if sym is not None and repr(args[1]) < repr(args[0]):
                args.reverse()
                sign = sym
            key = (name, tuple(args))
            out[key] = out.get(key, 0) + sign * coeff
            return
        for expr, c in kids[pos].items():
            rec(pos + 1, chosen + [expr], coeff * c)

    rec(0, [], Fraction(1))
    return {k: v for k, v in out.items() if v}


def substitute(expr_combo, leaf_map, symmetry):
    """Replace leaf ``j`` by the combination ``leaf_map[j]`` and renormalize."""
    def go(e):
        if isinstance(e, int):
            return leaf_map[e]
        name, kids = e
        return _norm_node(name, [go(k) for k in kids], symmetry)

    out = {}
    for e, c in expr_combo.items():
        for k, v in go(e).items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def to_expr(elem, symmetry):
    names = [g.name for g in elem.signature.generators]

    def tree(t):
        if op.is_leaf(t):
            return {t: Fraction(1)}
        return _norm_node(names[t[0]], [tree(c) for c in t[1]], symmetry)

    out = {}
    for t, c in elem.terms.items():
        for k, v in tree(t).items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def oracle_compose(e1, n1, i, e2, n2, symmetry):
    leaf_map = {}
    for j in range(1, n1 + 1):
        if j < i:
            leaf_map[j] = {j: Fraction(1)}
        elif j > i:
            leaf_map[j] = {j + n2 - 1: Fraction(1)}
    leaf_map[i] = substitute(e2, {k: {k + i - 1: Fraction(1)} for k in range(1, n2 + 1)}, symmetry)
    return substitute(e1, leaf_map, symmetry)


def oracle_act(e, sigma, symmetry):
    return substitute(e, {j: {sigma[j - 1]: Fraction(1)} for j in range(1, len(sigma) + 1)}, symmetry)

# --- strategies -------------------------------------------------------------------


@st.composite
def elements(draw, name, max_arity=3):
    pres = presets.preset(name)
    arity = draw(st.integers(1, max_arity))
    basis = op.composite_basis(pres, arity, bound=max_arity)
    picks = draw(st.lists(st.sampled_from(basis), min_size=1, max_size=3))
    total = op.OperadElement(pres.signature, arity)
    for b in picks:
        total = total + b.scale(draw(st.integers(-3, 3)))
    return total


@st.composite
def element_pairs(draw, names=ALL):
    name = draw(st.sampled_from(names))
    return name, draw(elements(name)), draw(elements(name)), draw(elements(name))

# --- composition against the oracle ----------------------------------------------


@settings(max_examples=250)
@given(st.data())
def test_composition_and_action_match_expression_oracle(data):
    name = data.draw(st.sampled_from(UNGRADED))
    sym = SYMMETRY[name]
    a, b = data.draw(elements(name)), data.draw(elements(name))
    i = data.draw(st.integers(1, a.arity))
    got = to_expr(a.compose(i, b), sym)
    assert got == oracle_compose(to_expr(a, sym), a.arity, i, to_expr(b, sym), b.arity, sym)
    sigma = data.draw(st.permutations(range(1, a.arity + 1)))
    assert to_expr(a.act(sigma), sym) == oracle_act(to_expr(a, sym), tuple(sigma), sym)

# --- operad axioms ------------------------------------------------------------------


def cdeg_of(elem):
    degs = {elem.signature.cdeg(t) for t in elem.terms}
    return degs.pop() if len(degs) == 1 else None


@settings(max_examples=250)
@given(element_pairs(), st.data())
def test_sequential_associativity(triple, data):
    _, a, b, c = triple
    i = data.draw(st.integers(1, a.arity))
    j = data.draw(st.integers(1, b.arity))
    assert a.compose(i, b).compose(i - 1 + j, c) == a.compose(i, b.compose(j, c))


@settings(max_examples=250)
@given(element_pairs(), st.data())
def test_parallel_associativity_with_koszul_sign(triple, data):
    _, a, b, c = triple
    if a.arity < 2 or cdeg_of(b) is None or cdeg_of(c) is None:
        return
    i = data.draw(st.integers(1, a.arity - 1))
    k = data.draw(st.integers(i + 1, a.arity))
    sign = (-1) ** (cdeg_of(b) * cdeg_of(c))
    lhs = a.compose(i, b).compose(k + b.arity - 1, c)
    rhs = a.compose(k, c).compose(i, b).scale(sign)
    assert lhs == rhs


@settings(max_examples=200)
@given(element_pairs(), st.data())
def test_equivariance(triple, data):
    _, a, b, _ = triple
    sigma = tuple(data.draw(st.permutations(range(1, a.arity + 1))))
    tau = tuple(data.draw(st.permutations(range(1, b.arity + 1))))
    i = data.draw(st.integers(1, a.arity))
    lhs = a.act(sigma).compose(i, b.act(tau))
    j = perms.inverse(sigma)[i - 1]
    rhs = a.compose(j, b).act(perms.block_substitute(sigma, i, tau))
    assert lhs == rhs


@settings(max_examples=200)
@given(element_pairs(), st.data())
def test_action_is_a_right_action(triple, data):
    _, a, _, _ = triple
    sigma = tuple(data.draw(st.permutations(range(1, a.arity + 1))))
    tau = tuple(data.draw(st.permutations(range(1, a.arity + 1))))
    assert a.act(sigma).act(tau) == a.act(perms.compose(sigma, tau))
    assert a.act(perms.identity(a.arity)) == a


@settings(max_examples=100)
@given(element_pairs())
def test_unit_laws(triple):
    _, a, _, _ = triple
    unit = op.unit(a.signature)
    assert unit.compose(1, a) == a
    for i in range(1, a.arity + 1):
        assert a.compose(i, unit) == a

# --- concrete facts ---------------------------------------------------------------------


def test_lie_bracket_is_antisymmetric():
    pres = presets.preset("lie")
    c = pres.generator("c")
    assert c.act((2, 1)) == -c


def test_jacobiator_transforms_by_sign():
    pres = presets.preset("lie")
    (jac,) = pres.relations
    for sigma in perms.all_permutations(3):
        assert jac.act(sigma) == jac.scale(perms.sign(sigma))


def test_commutative_associator_relation_count():
    assert len(presets.preset("perm").relations) == 3
    assert len(presets.preset("tass3").relations) == 3


@pytest.mark.parametrize("name, arity, expected", [
    ("ass", 3, 2 * factorial(3)),
    ("ass", 4, 5 * factorial(4)),
    ("lie", 3, 3),
    ("lie", 4, 15),
    ("com", 4, 15),
    ("pois", 3, 4 * 3),
    ("tass3", 5, 3 * factorial(5)),
])
def test_composite_basis_counts(name, arity, expected):
    pres = presets.preset(name)
    assert len(op.composite_basis(pres, arity, bound=arity)) == expected


def test_composite_basis_bound_and_unary_weight():
    with pytest.raises(InputError):
        op.composite_basis(presets.preset("lie"), 9)
    bv = presets.preset("bv")
    trees = op.composite_basis(bv, 1, max_weight=2)
    # leaf, Delta(leaf), Delta(Delta(leaf))
    assert len(trees) == 3


def test_graded_bracket_signs():
    gerst = presets.preset("gerst")
    c = gerst.generator("c")
    # the degree-one bracket is symmetric under the swap in this convention
    assert c.act((2, 1)) == c
    # moving c past c costs a sign in parallel composition
    m = gerst.generator("m")
    lhs = m.compose(1, c).compose(3, c)
    rhs = m.compose(2, c).compose(1, c)
    assert lhs == -rhs


def test_relations_are_homogeneous_and_well_typed():
    for name in presets.PRESET_NAMES:
        pres = presets.preset(name, 3 if name in KARY else None)
        for rel in pres.relations:
            assert not rel.is_zero()
            if pres.graded:
                assert cdeg_of(rel) is not None


@pytest.mark.parametrize("name", sorted(set(presets.PRESET_NAMES)))
def test_presentation_json_round_trip(name):
    pres = presets.preset(name, 3 if name in KARY else None)
    again = op.presentation_from_json(op.presentation_to_json(pres))
    assert again.signature == pres.signature
    assert again.relations == pres.relations
    assert (again.graded, again.nonquadratic) == (pres.graded, pres.nonquadratic)


def test_tree_terms_round_trip():
    pres = presets.preset("pois")
    for elem in op.composite_basis(pres, 3):
        terms = op.tree_terms(elem)
        assert op.from_tree_terms(pres.signature, 3, terms) == elem


def test_input_errors():
    with pytest.raises(InputError):
        presets.preset("nosuch")
    with pytest.raises(InputError):
        presets.preset("tass")
    lie = presets.preset("lie")
    c = lie.generator("c")
    with pytest.raises(InputError):
        c.compose(3, c)
    with pytest.raises(InputError):
        c.act((1, 2, 3))
    with pytest.raises(InputError):
        op.GeneratorSpec("bad", 0)
    with pytest.raises(InputError):
        op.presentation_from_json({"name": "x"})
