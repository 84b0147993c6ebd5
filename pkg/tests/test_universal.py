import json
from fractions import Fraction
from pathlib import Path

import pytest
import sympy
from hypothesis import given, settings, strategies as st

import algebras as A
from opcoact import palgebra as pa
from opcoact import polyring as pr
from opcoact import presets
from opcoact import universal as U
from opcoact.errors import AxiomFailure, InputError, RingModeError
from opcoact.polyring import GRADED, PLAIN, Polynomial, X

from test_polyring import to_sympy

GOLDEN = Path(__file__).parent / "golden" / "graded_lie_xy.json"

# --- hand-coded binary oracle ------------------------------------------------------------


def full_table(table: dict, antisymmetric: bool) -> dict:
    out = {k: dict(v) for k, v in table.items()}
    if antisymmetric:
        for (i, j), v in table.items():
            out[(j, i)] = {s: -c for s, c in v.items()}
    return out


def oracle_binary_polynomials(table: dict, dim: int) -> set:
    """P^a_ij = sum_u alpha^u_ij x_au - sum_{s,t} alpha^a_st x_si x_tj, zeros removed."""
    x = {(s, i): sympy.Symbol(f"x_0_0_{s}_{i}") for s in range(1, dim + 1) for i in range(1, dim + 1)}
    out = set()
    for a in range(1, dim + 1):
        for i in range(1, dim + 1):
            for j in range(1, dim + 1):
                p = sum((c * x[(a, u)] for u, c in table.get((i, j), {}).items()), sympy.Integer(0))
                for s in range(1, dim + 1):
                    for t in range(1, dim + 1):
                        p -= table.get((s, t), {}).get(a, 0) * x[(s, i)] * x[(t, j)]
                p = sympy.expand(p)
                if p != 0:
                    out.add(p)
    return out


ORACLE_CASES = [
    ("lie", "l2", 2, A.L2, True), ("lie", "heisenberg", 3, A.HEISENBERG, True),
    ("lie", "sl2", 3, A.SL2, True), ("lie", "l2_plus_l2", 4, A.direct_sum(A.L2, 2, A.L2), True),
    ("ass", "dual_numbers", 2, A.DUAL_NUMBERS, False),
    ("ass", "upper_triangular", 3, A.UPPER_TRIANGULAR, False),
    ("ass", "truncated_cubic", 3, A.TRUNCATED_CUBIC, False),
    ("ass", "matrix_2x2", 4, A.MATRIX_2X2, False),
    ("leib", "leibniz2", 2, A.RIGHT_LEIBNIZ, False),
    ("leib", "leibniz2_plus_line", 3, A.RIGHT_LEIBNIZ, False),
    ("leib", "sl2", 3, full_table(A.SL2, True), False),
] + [("lie", f"abelian{n}", n, {}, True) for n in range(1, 5)]


def build(operad, table, dim, antisymmetric):
    if operad == "lie":
        return A.lie("x", dim, table) if antisymmetric else None
    return A.binary("x", dim, table)


@pytest.mark.parametrize("operad, name, dim, table, antisym", ORACLE_CASES,
                         ids=[f"{c[0]}-{c[1]}" for c in ORACLE_CASES])
def test_polynomials_match_hand_coded_oracle(operad, name, dim, table, antisym):
    alg = build(operad, table, dim, antisym)
    got = {to_sympy(p) for p in U.universal_polynomials(alg, None, presets.preset(operad)).polynomials}
    assert got == oracle_binary_polynomials(full_table(table, antisym), dim)


def test_l2_example():
    pres = U.universal_polynomials(A.l2(), None, presets.preset("lie"))
    x = {(s, i): Polynomial.var(X(s, i)) for s in (1, 2) for i in (1, 2)}
    lookup = pres.lookup()
    assert lookup[U.JTag("c", 1, (1, 2))] == x[1, 1] - (x[1, 1] * x[2, 2] - x[2, 1] * x[1, 2])
    # [e1,e2] has no e2 component, so only the linear term survives
    assert lookup[U.JTag("c", 2, (1, 2))] == x[2, 1]
    gb = pres.groebner()
    assert {to_sympy(b) for b in gb.basis} == {
        sympy.expand(sympy.Symbol("x_0_0_2_1")),
        sympy.expand(sympy.Symbol("x_0_0_1_1") * sympy.Symbol("x_0_0_2_2") - sympy.Symbol("x_0_0_1_1")),
    }


@pytest.mark.parametrize("n", range(1, 5))
def test_abelian_algebras_give_empty_ideal(n):
    pres = U.universal_polynomials(A.abelian(n), None, presets.preset("lie"))
    assert pres.jgens == ()
    assert pres.dropped_zero == n * n * n


def test_zero_dimensional_algebra():
    alg = A.abelian(0)
    pres = U.universal_polynomials(alg, None, presets.preset("lie"))
    assert pres.jgens == () and pres.variables() == []


def test_invalid_algebra_is_refused():
    with pytest.raises(AxiomFailure):
        U.universal_polynomials(A.as_mu(A.l2()), None, presets.preset("ass"))
    pres = U.universal_polynomials(A.as_mu(A.l2()), None, presets.preset("ass"), check=False)
    assert pres.jgens

# --- structural properties ----------------------------------------------------------------

CATALOG = [
    (A.l2, "lie"), (A.heisenberg, "lie"), (A.sl2, "lie"), (A.dual_numbers, "ass"),
    (A.upper_triangular, "ass"), (A.leibniz2, "leib"), (A.prelie2, "prelie"),
    (A.zinbiel2, "zinb"), (A.tass1, "tass3"), (A.ternary_nilpotent, "tass3"),
    (A.ternary_nilpotent, "pass3"),
]
CATALOG_IDS = [f"{m.__name__}-{n}" for m, n in CATALOG]


@pytest.mark.parametrize("make, name", CATALOG, ids=CATALOG_IDS)
def test_identity_is_a_zero_and_degrees_are_bounded(make, name):
    alg, pres = make(), presets.preset(name)
    up = U.universal_polynomials(alg, None, pres)
    identity = {X(s, i): int(s == i) for s in range(1, alg.dim + 1) for i in range(1, alg.dim + 1)}
    max_arity = max(g.arity for g in pres.generators)
    for t in up.jgens:
        assert pr.poly_eval(t.poly, identity) == 0
        assert t.poly.total_degree() <= max_arity
        degrees = {sum(e for _, e in m) for m in t.poly.terms}
        assert degrees <= {1, max_arity}


def test_two_algebra_grid_locality():
    heis, ab = A.heisenberg(), A.abelian(2)
    pres = presets.preset("lie")
    up = U.universal_polynomials(heis, ab, pres)
    assert (up.src_dim, up.tgt_dim) == (3, 2)
    for t in up.jgens:
        assert all(v.s <= 3 and v.i <= 2 for v in t.poly.variables())
        assert 1 <= t.tag.a <= 3 and all(1 <= i <= 2 for i in t.tag.inputs)
    # morphisms B -> A are exactly the rational zeros of the polynomials
    for f in ([[0, 0], [0, 0], [0, 0]], [[1, 0], [0, 1], [0, 0]], [[1, 2], [3, 4], [5, 6]]):
        point = {X(s + 1, i + 1): f[s][i] for s in range(3) for i in range(2)}
        zero_set = all(pr.poly_eval(p, point) == 0 for p in up.polynomials)
        assert zero_set == pa.check_morphism(f, ab, heis, pres)


@settings(max_examples=150)
@given(st.lists(st.integers(-2, 2), min_size=9, max_size=9), st.sampled_from([0, 1, 2]))
def test_zeros_are_exactly_the_endomorphisms(vals, which):
    make, name = [(A.heisenberg, "lie"), (A.sl2, "lie"), (A.upper_triangular, "ass")][which]
    alg, pres = make(), presets.preset(name)
    f = [vals[0:3], vals[3:6], vals[6:9]]
    up = U.universal_polynomials(alg, None, pres)
    point = {X(s + 1, i + 1): f[s][i] for s in range(3) for i in range(3)}
    zero_set = all(pr.poly_eval(p, point) == 0 for p in up.polynomials)
    assert zero_set == pa.check_morphism(f, alg, alg, pres)

# --- graded --------------------------------------------------------------------------------


def concentrated_in_degree_zero(alg: pa.StructureAlgebra) -> pa.StructureAlgebra:
    return pa.StructureAlgebra(alg.name, (alg.dim,), True, dict(alg.operations))


GRADED_PRESET = {"lie": "gradedlie", "leib": "gradedleib"}


@pytest.mark.parametrize("make, name", [(A.l2, "lie"), (A.sl2, "lie"), (A.heisenberg, "lie"),
                                        (A.leibniz2, "leib")])
def test_degree_zero_graded_case_matches_plain(make, name):
    alg = make()
    plain = U.universal_polynomials(alg, None, presets.preset(name))
    graded = U.graded_universal_polynomials(concentrated_in_degree_zero(alg),
                                            presets.preset(GRADED_PRESET[name]))
    converted = {}
    for t in graded.jgens:
        assert t.tag.omega == 0 and not t.degenerate
        assert all(p == 0 for p, _ in t.tag.inputs)
        key = (t.tag.gen, t.tag.a, tuple(i for _, i in t.tag.inputs))
        converted[key] = pr.poly_from_json(pr.poly_to_json(t.poly), PLAIN)
    assert converted == {(t.tag.gen, t.tag.a, t.tag.inputs): t.poly for t in plain.jgens}
    assert graded.dropped_zero == plain.dropped_zero


def load_golden():
    data = json.loads(GOLDEN.read_text())
    out = {}
    for entry in data["jgens"]:
        terms = [(Fraction(t["coeff"]), [(X(s, i, pi), 1) for s, i, pi in t["vars"]]) for t in entry["terms"]]
        tag = U.JTag(entry["gen"], entry["a"], tuple(tuple(x) for x in entry["inputs"]), entry["omega"])
        out[tag] = Polynomial.from_terms(terms, GRADED)
    return out


def test_graded_lie_matches_golden_file():
    up = U.graded_universal_polynomials(A.graded_lie_xy(), presets.preset("gradedlie"))
    assert up.lookup() == load_golden()
    assert not any(t.degenerate for t in up.jgens)


def test_graded_lie_hand_values():
    lookup = U.graded_universal_polynomials(A.graded_lie_xy(), presets.preset("gradedlie")).lookup()
    x0, x1 = Polynomial.var(X(1, 1, 0), GRADED), Polynomial.var(X(1, 1, 1), GRADED)
    xy, yx, yy = ((0, 1), (1, 1)), ((1, 1), (0, 1)), ((1, 1), (1, 1))
    assert lookup[U.JTag("c", 1, xy, 0)] == x0 - x0 * x0
    assert lookup[U.JTag("c", 1, xy, 1)] == x1
    assert lookup[U.JTag("c", 1, yx, 0)] == -(x0 - x0 * x0)
    assert lookup[U.JTag("c", 1, yx, 1)] == -x1
    assert lookup[U.JTag("c", 1, yy, 1)] == (x0 * x1).scale(2)


def gerst_example():
    """H0 = Ke, H1 = Kf, degree-one bracket c(e,e) = f, zero product."""
    alg = pa.graded("gerst_example", [1, 1], {"c": {((0, 1), (0, 1)): {(1, 1): 1}}}, "symmetric", {"c": 1})
    return alg.with_operations({**alg.operations, "m": pa.StructureTensor(2, {})})


def test_degenerate_generators_are_flagged():
    up = U.graded_universal_polynomials(gerst_example(), presets.preset("gerst"))
    degenerate = [t for t in up.jgens if t.degenerate]
    assert [(t.tag, t.poly) for t in degenerate] == [
        (U.JTag("c", 1, ((0, 1), (0, 1)), 1), Polynomial.var(X(1, 1, 1), GRADED))]


GRADED_CASES = [(A.graded_lie_xy, "gradedlie"), (A.odd_square, "gradedlie"), (gerst_example, "gerst")]


@pytest.mark.parametrize("make, name", GRADED_CASES, ids=[m.__name__ for m, _ in GRADED_CASES])
def test_graded_polynomials_are_homogeneous(make, name):
    up = U.graded_universal_polynomials(make(), presets.preset(name))
    for t in up.jgens:
        assert t.poly.cdegs() == {t.tag.omega}


@given(st.lists(st.integers(0, 3), min_size=1, max_size=4), st.data())
def test_koszul_exponent_matches_reordering(p, data):
    eps = [data.draw(st.integers(0, x)) for x in p]
    # reorder a_1 c_1 .. a_k c_k into a_1 .. a_k c_1 .. c_k counting odd/odd crossings
    swaps = 0
    for j in range(len(p)):
        for r in range(j + 1, len(p)):
            swaps += (p[j] - eps[j]) * eps[r]
    assert U.koszul_exponent(eps, p) % 2 == swaps % 2

# --- coaction --------------------------------------------------------------------------------


@pytest.mark.parametrize("make, name", CATALOG, ids=CATALOG_IDS)
def test_eta_is_a_morphism(make, name):
    alg, pres = make(), presets.preset(name)
    up = U.universal_polynomials(alg, None, pres)
    report = U.verify_eta_morphism(alg, None, pres, up)
    assert report.passed and report.checked > 0


@pytest.mark.parametrize("make, name", GRADED_CASES, ids=[m.__name__ for m, _ in GRADED_CASES])
def test_eta_is_a_morphism_graded(make, name):
    alg, pres = make(), presets.preset(name)
    report = U.verify_eta_morphism(alg, None, pres, U.graded_universal_polynomials(alg, pres))
    assert report.passed and report.mode == GRADED


def test_eta_detects_a_foreign_presentation():
    pres = presets.preset("lie")
    original = U.universal_polynomials(A.l2(), None, pres)
    perturbed = A.lie("l2_perturbed", 2, {(1, 2): {1: 1, 2: 1}})
    assert pa.check_axioms(perturbed, pres).passed
    assert not U.verify_eta_morphism(perturbed, None, pres, original).passed


def test_eta_detects_a_foreign_graded_presentation():
    pres = presets.preset("gradedlie")
    original = U.graded_universal_polynomials(A.graded_lie_xy(), pres)
    doubled = pa.graded("doubled", [1, 1], {"c": {((0, 1), (1, 1)): {(1, 1): 2}}}, "antisymmetric")
    assert not U.verify_eta_morphism(doubled, None, pres, original).passed


def test_eta_images():
    up = U.universal_polynomials(A.l2(), None, presets.preset("lie"))
    images = U.eta(up).images
    assert images[2] == {1: Polynomial.var(X(1, 2)), 2: Polynomial.var(X(2, 2))}
    gup = U.graded_universal_polynomials(A.graded_lie_xy(), presets.preset("gradedlie"))
    gimages = U.eta(gup).images
    assert set(gimages[(1, 1)]) == {(0, 1), (1, 1)}
    assert gimages[(1, 1)][(0, 1)] == Polynomial.var(X(1, 1, 1), GRADED)


def test_two_algebra_eta():
    pres = presets.preset("lie")
    up = U.universal_polynomials(A.heisenberg(), A.abelian(2), pres)
    assert U.verify_eta_morphism(A.heisenberg(), A.abelian(2), pres, up).passed

# --- generation -------------------------------------------------------------------------------


@pytest.mark.parametrize("make, name", CATALOG, ids=CATALOG_IDS)
def test_composites_add_nothing(make, name):
    alg, pres = make(), presets.preset(name)
    up = U.universal_polynomials(alg, None, pres)
    max_arity = 5 if name.endswith("3") else 3
    report = U.verify_generation(alg, pres, up, max_arity)
    assert report.passed and report.composites > 0


def test_generation_detects_missing_generators():
    alg, pres = A.sl2(), presets.preset("lie")
    up = U.universal_polynomials(alg, None, pres)
    truncated = U.UniversalPresentation(up.src_dim, up.tgt_dim, False, up.jgens[: len(up.jgens) // 3])
    assert not U.verify_generation(alg, pres, truncated, 3).passed


def test_generation_input_checks():
    alg, pres = A.tass1(), presets.preset("tass3")
    up = U.universal_polynomials(alg, None, pres)
    with pytest.raises(InputError):
        U.verify_generation(alg, pres, up, 2)
    gup = U.graded_universal_polynomials(A.graded_lie_xy(), presets.preset("gradedlie"))
    with pytest.raises(RingModeError):
        U.verify_generation(A.graded_lie_xy(), presets.preset("gradedlie"), gup, 3)
    with pytest.raises(RingModeError):
        gup.groebner()

# --- JSON ---------------------------------------------------------------------------------------


@pytest.mark.parametrize("up", [
    U.universal_polynomials(A.sl2(), None, presets.preset("lie")),
    U.universal_polynomials(A.heisenberg(), A.abelian(2), presets.preset("lie")),
    U.graded_universal_polynomials(gerst_example(), presets.preset("gerst")),
], ids=["sl2", "heisenberg-abelian2", "gerst"])
def test_presentation_json_round_trip(up):
    again = U.presentation_from_json(json.loads(json.dumps(U.presentation_to_json(up))))
    assert again == up


def test_presentation_json_errors():
    with pytest.raises(InputError):
        U.presentation_from_json({"jgens": []})
    with pytest.raises(InputError):
        U.presentation_from_json({"src_dim": 1, "tgt_dim": 1, "order": "weird", "jgens": []})
