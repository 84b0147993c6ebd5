"""Catalog of named operad presentations.

Cycle notation such as ``(123)`` is converted with ``from_cycles``; one-line
tuples are used everywhere else.
"""

from __future__ import annotations

from typing import Callable

from . import permutations as perms
from .errors import InputError
from .operad import GeneratorSpec, OperadElement, OperadPresentation, Signature, generator

S3_23 = perms.from_cycles(3, [(2, 3)])
S3_123 = perms.from_cycles(3, [(1, 2, 3)])
S3_132 = perms.from_cycles(3, [(1, 3, 2)])


def _free(name: str, k: int, cdeg: int = 0) -> GeneratorSpec:
    return GeneratorSpec(name, k, cdeg, None)


def _scalar_action(name: str, k: int, value: int, cdeg: int = 0) -> GeneratorSpec:
    return GeneratorSpec(name, k, cdeg, tuple(((value,),) for _ in range(k - 1)))


def _diag_action(name: str, k: int, diagonal: tuple[int, ...], cdeg: int = 0) -> GeneratorSpec:
    size = len(diagonal)
    mat = tuple(tuple(diagonal[r] if r == c else 0 for c in range(size)) for r in range(size))
    return GeneratorSpec(name, k, cdeg, tuple(mat for _ in range(k - 1)))


def _comp(a: OperadElement, i: int, b: OperadElement) -> OperadElement:
    return a.compose(i, b)


def _associator(m: OperadElement) -> OperadElement:
    return _comp(m, 1, m) - _comp(m, 2, m)


def _jacobiator(c: OperadElement) -> OperadElement:
    cc = _comp(c, 1, c)
    return cc + cc.act(S3_123) + cc.act(S3_132)


def com() -> OperadPresentation:
    sig = Signature([_scalar_action("mu", 2, 1)])
    mu = generator(sig, 0)
    return OperadPresentation("com", sig, (_associator(mu),))


def ass() -> OperadPresentation:
    sig = Signature([_free("mu", 2)])
    mu = generator(sig, 0)
    return OperadPresentation("ass", sig, (_associator(mu),))


def _leib_relation(mu: OperadElement) -> OperadElement:
    return _comp(mu, 1, mu) - _comp(mu, 2, mu) - _comp(mu, 1, mu).act(S3_23)


def leib(graded: bool = False) -> OperadPresentation:
    sig = Signature([_free("mu", 2)])
    mu = generator(sig, 0)
    return OperadPresentation("graded_leib" if graded else "leib", sig,
                              (_leib_relation(mu),), graded=graded)


def lie(graded: bool = False) -> OperadPresentation:
    sig = Signature([_scalar_action("c", 2, -1)])
    c = generator(sig, 0)
    return OperadPresentation("graded_lie" if graded else "lie", sig, (_jacobiator(c),), graded=graded)


def zinb() -> OperadPresentation:
    sig = Signature([_free("mu", 2)])
    mu = generator(sig, 0)
    rel = _comp(mu, 1, mu) - _comp(mu, 2, mu) - _comp(mu, 2, mu).act(S3_23)
    return OperadPresentation("zinb", sig, (rel,))


def pois(graded: bool = False) -> OperadPresentation:
    sig = Signature([_diag_action("c", 2, (-1, 1)), _diag_action("mu", 2, (-1, 1))])
    c, mu = generator(sig, 0), generator(sig, 1)
    leibniz_rule = _comp(c, 1, mu) - _comp(mu, 1, c).act(S3_23) - _comp(mu, 2, c)
    return OperadPresentation("graded_pois" if graded else "pois", sig,
                              (_jacobiator(c), _associator(mu), leibniz_rule), graded=graded)


def prelie() -> OperadPresentation:
    sig = Signature([_free("mu", 2)])
    mu = generator(sig, 0)
    rel = (_comp(mu, 1, mu) - _comp(mu, 2, mu)
           - _comp(mu, 1, mu).act(S3_23) + _comp(mu, 2, mu).act(S3_23))
    return OperadPresentation("prelie", sig, (rel,))


def perm() -> OperadPresentation:
    sig = Signature([_free("mu", 2)])
    mu = generator(sig, 0)
    left, right = _comp(mu, 1, mu), _comp(mu, 2, mu)
    rels = (left - right, left - right.act(S3_23), right - left.act(S3_23))
    return OperadPresentation(
        "perm", sig, rels,
        notes=("all three listed relations are stored; their span is not reduced",))


def _check_k(k: int | None) -> int:
    if k is None:
        raise InputError("this preset needs an arity k")
    if k < 2:
        raise InputError("k must be at least 2")
    return k


def tass(k: int | None) -> OperadPresentation:
    k = _check_k(k)
    sig = Signature([_free("mu", k)])
    mu = generator(sig, 0)
    rels = tuple(_comp(mu, i, mu) - _comp(mu, j, mu)
                 for i in range(1, k + 1) for j in range(i + 1, k + 1))
    return OperadPresentation(f"tass{k}", sig, rels)


def pass_(k: int | None) -> OperadPresentation:
    k = _check_k(k)
    sig = Signature([_free("mu", k)])
    mu = generator(sig, 0)
    rel = OperadElement(sig, 2 * k - 1)
    for i in range(1, k + 1):
        rel = rel + _comp(mu, i, mu).scale((-1) ** ((i + 1) * (k - 1)))
    return OperadPresentation(f"pass{k}", sig, (rel,))


def filippov_permutation(k: int, i: int) -> perms.Perm:
    """Labels read left to right in the i-th right-hand term: 1..i-1, i, k+1..2k-1, i+1..k."""
    return tuple(list(range(1, i + 1)) + list(range(k + 1, 2 * k)) + list(range(i + 1, k + 1)))


def _filippov_relation(mu: OperadElement, k: int) -> OperadElement:
    rel = _comp(mu, 1, mu)
    for i in range(1, k + 1):
        rel = rel - _comp(mu, i, mu).act(filippov_permutation(k, i))
    return rel


def klie(k: int | None) -> OperadPresentation:
    k = _check_k(k)
    sig = Signature([_scalar_action("mu", k, -1)])
    mu = generator(sig, 0)
    return OperadPresentation(f"klie{k}", sig, (_filippov_relation(mu, k),))


def kleib(k: int | None) -> OperadPresentation:
    k = _check_k(k)
    sig = Signature([_free("mu", k)])
    mu = generator(sig, 0)
    return OperadPresentation(f"kleib{k}", sig, (_filippov_relation(mu, k),))


def gerst() -> OperadPresentation:
    sig = Signature([_diag_action("m", 2, (1, 1)), _diag_action("c", 2, (1, 1), cdeg=1)])
    m, c = generator(sig, 0), generator(sig, 1)
    leibniz_rule = _comp(c, 1, m) - _comp(m, 2, c) - _comp(m, 1, c).act(S3_23)
    return OperadPresentation("gerst", sig, (_jacobiator(c), leibniz_rule, _associator(m)),
                              graded=True)


def bv() -> OperadPresentation:
    sig = Signature([_scalar_action("m", 2, 1), GeneratorSpec("Delta", 1, 1, ())])
    m, delta = generator(sig, 0), generator(sig, 1)
    mm = _comp(m, 1, m)
    seven_term = _comp(delta, 1, mm)
    outer_delta = _comp(m, 1, _comp(delta, 1, m))   # Delta(x y) z
    inner_delta = _comp(mm, 1, delta)                 # Delta(x) y z
    for sigma in (perms.identity(3), S3_123, S3_132):
        seven_term = seven_term - outer_delta.act(sigma) + inner_delta.act(sigma)
    return OperadPresentation(
        "bv", sig, (mm - _comp(m, 2, m), _comp(delta, 1, delta), seven_term),
        graded=True, nonquadratic=True,
        notes=("the cubic seven-term relation is not quadratic",))


_PLAIN: dict[str, Callable[[], OperadPresentation]] = {
    "com": com, "ass": ass, "leib": leib, "lie": lie, "zinb": zinb, "pois": pois,
    "prelie": prelie, "perm": perm,
    "gradedleib": lambda: leib(graded=True), "gradedlie": lambda: lie(graded=True),
    "gradedpois": lambda: pois(graded=True), "gerst": gerst, "bv": bv,
}
_KARY: dict[str, Callable[[int | None], OperadPresentation]] = {
    "tass": tass, "pass": pass_, "klie": klie, "kleib": kleib,
}

PRESET_NAMES = tuple(sorted(list(_PLAIN) + list(_KARY)))


def _normalize(name: str) -> tuple[str, int | None]:
    key = name.lower().replace("-", "").replace("_", "").replace(" ", "")
    # allow a trailing arity, e.g. "tass3"
    digits = ""
    while key and key[-1].isdigit():
        digits = key[-1] + digits
        key = key[:-1]
    return key, (int(digits) if digits else None)


def preset(name: str, k: int | None = None) -> OperadPresentation:
    key, suffix = _normalize(name)
    if key in _KARY:
        if suffix is not None and k is not None and suffix != k:
            raise InputError(f"conflicting arities {suffix} and {k} for {name!r}")
        return _KARY[key](k if k is not None else suffix)
    if key in _PLAIN:
        if k is not None or suffix is not None:
            raise InputError(f"preset {name!r} does not take an arity")
        return _PLAIN[key]()
    raise InputError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")
