"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 on malformed input and 3 when the Groebner budget is exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable

from . import coact, palgebra, universal
from .errors import BudgetExceeded, CheckFailure, InputError
from .groebner import Budget, Ideal, buchberger
from .operad import OperadPresentation, presentation_from_json
from .polyring import DEGREVLEX, MONOMIAL_ORDERS, format_text, poly_from_json, poly_to_json
from .presets import preset

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class Result:
    """A report plus its pass/fail verdict."""

    def __init__(self, passed: bool, data: dict, text: list[str]):
        self.passed = passed
        self.data = data
        self.text = text


# input helpers ---------------------------------------------------------------

def _load_json(source: str, what: str):
    """Inline JSON, or a path to a JSON file."""
    text = source
    path = Path(source)
    if not source.lstrip().startswith(("[", "{")):
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {what} {source!r}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} is not valid JSON: {exc}") from exc


def load_operad(spec: str, k: int | None) -> OperadPresentation:
    if Path(spec).is_file():
        return presentation_from_json(_load_json(spec, "operad file"))
    return preset(spec, k)


def load_algebra(source: str) -> palgebra.StructureAlgebra:
    return palgebra.algebra_from_json(_load_json(source, "algebra"))


def _budget(args) -> Budget:
    base = Budget.from_env()
    return Budget(args.max_steps or base.max_steps, args.max_basis or base.max_basis)


def _fmt_tag(tag) -> str:
    inputs = ",".join(str(x) if not isinstance(x, tuple) else f"({x[0]},{x[1]})" for x in tag.inputs)
    omega = "" if tag.omega is None else f" omega={tag.omega}"
    return f"{tag.gen} a={tag.a} inputs=({inputs}){omega}"


def _tag_json(tag) -> dict:
    data = {"gen": tag.gen, "a": tag.a,
            "inputs": [list(x) if isinstance(x, tuple) else x for x in tag.inputs]}
    if tag.omega is not None:
        data["omega"] = tag.omega
    return data


def _label_json(x):
    return list(x) if isinstance(x, tuple) else x


# commands --------------------------------------------------------------------

def cmd_check_axioms(args) -> Result:
    pres = load_operad(args.operad, args.k)
    alg = load_algebra(args.algebra)
    report = palgebra.check_axioms(alg, pres)
    data = {
        "command": "check-axioms", "operad": pres.name, "algebra": alg.name, "passed": report.passed,
        "relations": [{"index": r + 1, "violations": [[_label_json(x) for x in key] for key in keys]}
                      for r, keys in sorted(report.relation_violations.items())],
        "action_violations": [{"gen": g, "transposition": j, "inputs": [_label_json(x) for x in key]}
                              for g, j, key in report.action_violations],
    }
    text = [f"check-axioms {alg.name} over {pres.name}: {'PASS' if report.passed else 'FAIL'}"]
    for r, keys in sorted(report.relation_violations.items()):
        text.append(f"  relation {r + 1}: {len(keys)} violating input tuple(s)"
                    + (f", first {keys[0]}" if keys else ""))
    for g, j, key in report.action_violations:
        text.append(f"  symmetry of {g} under ({j} {j + 1}) fails at {key}")
    return Result(report.passed, data, text)


def _presentation(args, pres, alg, target=None) -> universal.UniversalPresentation:
    return universal.universal_polynomials(alg, target, pres, args.order)


def _presentation_result(command: str, up: universal.UniversalPresentation, order: str) -> Result:
    data = {"command": command, **universal.presentation_to_json(up)}
    text = [f"{command}: {len(up.jgens)} generator(s), {up.dropped_zero} zero polynomial(s) dropped"]
    for t in up.jgens:
        flag = "  [degenerate]" if t.degenerate else ""
        text.append(f"  {_fmt_tag(t.tag)}: {format_text(t.poly, order)}{flag}")
    return Result(True, data, text)


def cmd_polys(args) -> Result:
    pres = load_operad(args.operad, args.k)
    alg = load_algebra(args.algebra)
    target = load_algebra(args.target) if args.target else None
    if alg.graded:
        raise InputError("graded algebra: use graded-polys")
    return _presentation_result("polys", _presentation(args, pres, alg, target), args.order)


def cmd_graded_polys(args) -> Result:
    pres = load_operad(args.operad, args.k)
    alg = load_algebra(args.algebra)
    up = universal.graded_universal_polynomials(alg, pres, args.order)
    return _presentation_result("graded-polys", up, args.order)


def cmd_groebner(args) -> Result:
    budget = _budget(args)
    if args.ideal:
        data = _load_json(args.ideal, "ideal")
        try:
            gens = [poly_from_json(p) for p in data["generators"]]
            order = data.get("order", args.order)
        except (KeyError, TypeError) as exc:
            raise InputError("an ideal file needs a 'generators' list") from exc
        gb = buchberger(Ideal(gens, order), budget)
    else:
        if not args.algebra:
            raise InputError("groebner needs --algebra or --ideal")
        pres = load_operad(args.operad, args.k)
        alg = load_algebra(args.algebra)
        up = _presentation(args, pres, alg)
        if up.graded:
            raise InputError("Groebner bases are only computed for ungraded algebras")
        order = up.order
        gb = up.groebner(budget)
    data = {"command": "groebner", "order": order, "reduced": gb.reduced,
            "basis": [poly_to_json(g, order) for g in gb.basis]}
    text = [f"groebner ({order}): {len(gb.basis)} element(s)"]
    text += [f"  {format_text(g, order)}" for g in gb.basis]
    return Result(True, data, text)


def cmd_verify_eta(args) -> Result:
    pres = load_operad(args.operad, args.k)
    alg = load_algebra(args.algebra)
    target = load_algebra(args.target) if args.target else None
    if args.presentation:
        up = universal.presentation_from_json(_load_json(args.presentation, "presentation"))
    else:
        up = universal.universal_polynomials(alg, target, pres, args.order)
    report = universal.verify_eta_morphism(alg, target, pres, up, _budget(args))
    data = {"command": "verify-eta", "mode": report.mode, "checked": report.checked,
            "passed": report.passed,
            "failures": [[_label_json(x) if not isinstance(x, tuple) else [_label_json(y) for y in x]
                          for x in f] for f in report.failures]}
    text = [f"verify-eta ({report.mode}): {report.checked} component(s), "
            f"{len(report.failures)} failure(s): {'PASS' if report.passed else 'FAIL'}"]
    text += [f"  {f}" for f in report.failures]
    return Result(report.passed, data, text)


def cmd_verify_t52(args) -> Result:
    pres = load_operad(args.operad, args.k)
    alg = load_algebra(args.algebra)
    up = _presentation(args, pres, alg)
    report = universal.verify_generation(alg, pres, up, args.max_arity, _budget(args))
    data = {"command": "verify-t52", "max_arity": args.max_arity, "composites": report.composites,
            "polynomials": report.polynomials, "distinct": report.distinct, "passed": report.passed,
            "non_members": [{"tree": t, "a": a, "inputs": list(i)} for t, a, i in report.non_members]}
    text = [f"verify-t52 up to arity {args.max_arity}: {report.composites} composite(s), "
            f"{report.distinct} distinct nonzero polynomial(s): {'PASS' if report.passed else 'FAIL'}"]
    text += [f"  not in J: {t} a={a} inputs={i}" for t, a, i in report.non_members]
    return Result(report.passed, data, text)


def cmd_bialgebra_check(args) -> Result:
    pres = load_operad(args.operad, args.k)
    alg = load_algebra(args.algebra)
    up = _presentation(args, pres, alg)
    report = coact.verify_bialgebra(up, None, _budget(args))
    data = {"command": "bialgebra-check", "passed": report.passed,
            "coassociative": report.coassociative, "counital": report.counital,
            "counit_failures": [_tag_json(t) for t in report.counit_failures],
            "coproduct_failures": [_tag_json(t) for t in report.coproduct_failures],
            "comodule": report.comodule}
    text = [f"bialgebra-check: {'PASS' if report.passed else 'FAIL'}",
            f"  coassociativity: {report.coassociative}", f"  counit laws: {report.counital}",
            f"  counit kills J: {not report.counit_failures}",
            f"  coproduct preserves J: {not report.coproduct_failures}",
            f"  comodule identity: {report.comodule}"]
    return Result(report.passed, data, text)


def _matrix_arg(args, up) -> coact.Matrix:
    if not args.matrix:
        raise InputError("--matrix is required")
    m = coact.as_matrix(_load_json(args.matrix, "matrix"))
    n = up.src_dim
    if len(m) != n or any(len(r) != n for r in m):
        raise InputError(f"matrix must be {n}x{n}")
    return m


def cmd_kpoint_check(args) -> Result:
    pres = load_operad(args.operad, args.k)
    alg = load_algebra(args.algebra)
    up = _presentation(args, pres, alg)
    c = _matrix_arg(args, up)
    bad = coact.kpoint_violations(up, c)
    data = {"command": "kpoint-check", "matrix": coact.matrix_to_json(c), "passed": not bad,
            "violations": [{"tag": _tag_json(t.tag), "poly": format_text(t.poly, up.order)} for t in bad]}
    text = [f"kpoint-check: {'PASS' if not bad else 'FAIL'}"]
    text += [f"  nonzero at the point: {_fmt_tag(t.tag)}: {format_text(t.poly, up.order)}" for t in bad]
    return Result(not bad, data, text)


def cmd_aut_check(args) -> Result:
    pres = load_operad(args.operad, args.k)
    alg = load_algebra(args.algebra)
    up = _presentation(args, pres, alg)
    c = _matrix_arg(args, up)
    report = coact.automorphism_report(up, alg, pres, c)
    bad, inverse = report.violations, report.inverse
    preserves, consistent, passed = report.zeta_is_morphism, report.consistent, report.passed
    data = {"command": "aut-check", "matrix": coact.matrix_to_json(c), "passed": passed,
            "kpoint": not bad, "invertible": inverse is not None,
            "inverse": None if inverse is None else coact.matrix_to_json(inverse),
            "zeta_is_morphism": preserves, "consistent": consistent,
            "violations": [{"tag": _tag_json(t.tag), "poly": format_text(t.poly, up.order)} for t in bad]}
    text = [f"aut-check: {'PASS' if passed else 'FAIL'}",
            f"  K-point: {not bad}", f"  invertible: {inverse is not None}",
            f"  zeta preserves the operations: {preserves}"]
    text += [f"  violated: {_fmt_tag(t.tag)}: {format_text(t.poly, up.order)}" for t in bad]
    if not consistent:
        text.append("  inconsistency between the K-point test and the morphism test")
    return Result(passed, data, text)


def _grading_arg(args, alg) -> coact.Grading:
    if not args.grading:
        raise InputError("--grading is required")
    return coact.grading_from_json(_load_json(args.grading, "grading"), alg.dim)


def _morphism_arg(args) -> coact.GroupMorphism:
    if not args.morphism:
        raise InputError("--morphism is required")
    return coact.morphism_from_json(_load_json(args.morphism, "morphism"))


def cmd_grading_check(args) -> Result:
    pres = load_operad(args.operad, args.k)
    alg = load_algebra(args.algebra)
    grading = _grading_arg(args, alg)
    bad = coact.grading_violations(alg, pres, grading)
    data = {"command": "grading-check", "passed": not bad,
            "violations": [{"gen": g, "inputs": list(c)} for g, c in bad]}
    text = [f"grading-check: {'PASS' if not bad else 'FAIL'}"]
    text += [f"  {g} leaves the product component on homogeneous vectors {c}" for g, c in bad]
    return Result(not bad, data, text)


def _morphism_result(command: str, m: coact.GroupMorphism, up) -> Result:
    report = coact.verify_group_morphism(up, m)
    data = {"command": command, **coact.morphism_to_json(m), "verified": report.passed}
    text = [f"{command}: {'PASS' if report.passed else 'FAIL'}"]
    for g, p in sorted(m.projections.items()):
        text.append(f"  P{coact.element_key(g)} = {coact.matrix_to_json(p)}")
    return Result(report.passed, data, text)


def cmd_grading_to_morphism(args) -> Result:
    pres = load_operad(args.operad, args.k)
    alg = load_algebra(args.algebra)
    m = coact.grading_to_morphism(alg, pres, _grading_arg(args, alg))
    return _morphism_result("grading-to-morphism", m, _presentation(args, pres, alg))


def cmd_morphism_to_grading(args) -> Result:
    pres = load_operad(args.operad, args.k)
    alg = load_algebra(args.algebra)
    up = _presentation(args, pres, alg)
    grading = coact.morphism_to_grading(up, _morphism_arg(args))
    data = {"command": "morphism-to-grading", **coact.grading_to_json(grading)}
    text = ["morphism-to-grading:"]
    for g, vs in sorted(grading.components.items()):
        text.append(f"  component {coact.element_key(g)}: {[[str(x) for x in v] for v in vs]}")
    return Result(True, data, text)


def cmd_conjugate(args) -> Result:
    pres = load_operad(args.operad, args.k)
    alg = load_algebra(args.algebra)
    up = _presentation(args, pres, alg)
    m = coact.conjugate(_morphism_arg(args), _matrix_arg(args, up), up)
    return _morphism_result("conjugate", m, up)


COMMANDS: dict[str, tuple[Callable, str]] = {
    "check-axioms": (cmd_check_axioms, "check an algebra against the relations of an operad"),
    "polys": (cmd_polys, "emit the universal polynomials"),
    "graded-polys": (cmd_graded_polys, "emit the graded universal polynomials"),
    "groebner": (cmd_groebner, "reduced Groebner basis of J or of an ideal file"),
    "verify-eta": (cmd_verify_eta, "check that the coaction is a morphism of algebras"),
    "verify-t52": (cmd_verify_t52, "check that composite operations add nothing to J"),
    "bialgebra-check": (cmd_bialgebra_check, "check the bialgebra and comodule laws"),
    "kpoint-check": (cmd_kpoint_check, "test whether a matrix annihilates J"),
    "aut-check": (cmd_aut_check, "test whether a matrix is an automorphism via J"),
    "grading-check": (cmd_grading_check, "test a group grading"),
    "grading-to-morphism": (cmd_grading_to_morphism, "projections of a grading"),
    "morphism-to-grading": (cmd_morphism_to_grading, "components of a group-algebra morphism"),
    "conjugate": (cmd_conjugate, "conjugate a group-algebra morphism by a K-point"),
}

_NEEDS_ALGEBRA = set(COMMANDS) - {"groebner"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opcoact", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--operad", default="lie", help="preset name or operad JSON file")
        p.add_argument("--k", type=int, default=None, help="arity for k-ary presets")
        p.add_argument("--algebra", required=name in _NEEDS_ALGEBRA, help="algebra JSON file")
        p.add_argument("--order", default=DEGREVLEX, choices=MONOMIAL_ORDERS)
        p.add_argument("--format", default="json", choices=("json", "text"))
        p.add_argument("--output", default=None, help="write the report here instead of stdout")
        p.add_argument("--max-steps", type=int, default=None, help="Groebner reduction step cap")
        p.add_argument("--max-basis", type=int, default=None, help="Groebner basis size cap")
        if name in ("polys", "verify-eta"):
            p.add_argument("--target", default=None, help="second algebra B for C(A, B)")
        if name == "verify-eta":
            p.add_argument("--presentation", default=None, help="presentation JSON to test against")
        if name == "verify-t52":
            p.add_argument("--max-arity", type=int, default=3)
        if name == "groebner":
            p.add_argument("--ideal", default=None, help="ideal JSON file")
        if name in ("kpoint-check", "aut-check", "conjugate"):
            p.add_argument("--matrix", default=None, help="JSON matrix, inline or as a file")
        if name in ("grading-check", "grading-to-morphism"):
            p.add_argument("--grading", default=None, help="grading JSON file")
        if name in ("morphism-to-grading", "conjugate"):
            p.add_argument("--morphism", default=None, help="morphism JSON file")
    return parser


def render(result: Result, fmt: str) -> str:
    if fmt == "text":
        return "\n".join(result.text) + "\n"
    return json.dumps(result.data, indent=2) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    try:
        if args.max_steps is not None and args.max_steps < 1 or \
                args.max_basis is not None and args.max_basis < 1:
            raise InputError("budget caps must be positive")
        result = COMMANDS[args.command][0](args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = render(result, args.format)
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_PASS if result.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
