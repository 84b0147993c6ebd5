"""Free operads on finitely many generators, tree terms and presentations.

A tree is either a leaf, stored as its positive integer label, or a node
``(generator_index, children)``.  The labels of a tree of arity ``n`` are
exactly ``1..n``; a leaf labelled ``l`` receives the ``l``-th input.

A generator either carries matrices for the adjacent transpositions of
``S_k`` (it then spans, together with the other such generators of the same
arity, a finite representation) or has ``action=None``, meaning it is *free*:
its permuted copies ``g . sigma`` are linearly independent.

Canonical form: the children of a non-free node are ordered by their minimal
leaf label; children of a free node keep their planar order and the labels
absorb the permutation.  Every tree stored in an ``OperadElement`` is
canonical, so equality is decided by comparing coefficient maps.

Generators may carry a cohomological degree.  Reordering subtrees or grafting
a subtree past nodes of odd total degree contributes the Koszul sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations as arrangements
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence, Union

from . import permutations as perms
from .errors import InputError
from .polyring import as_rational

Tree = Union[int, tuple]  # leaf label, or (generator_index, tuple_of_children)
Matrix = tuple[tuple[Fraction, ...], ...]


# tree helpers --------------------------------------------------------------

def is_leaf(t: Tree) -> bool:
    return isinstance(t, int)


def leaves(t: Tree) -> list[int]:
    """Leaf labels in planar (left to right) order."""
    if is_leaf(t):
        return [t]
    out: list[int] = []
    for c in t[1]:
        out.extend(leaves(c))
    return out


def min_label(t: Tree) -> int:
    return t if is_leaf(t) else min(min_label(c) for c in t[1])


def tree_key(t: Tree):
    """Total order on trees used for deterministic output."""
    return (0, t) if is_leaf(t) else (1, t[0], tuple(tree_key(c) for c in t[1]))


def relabel(t: Tree, mapping: Mapping[int, int] | Sequence[int]) -> Tree:
    if is_leaf(t):
        return mapping[t] if isinstance(mapping, Mapping) else mapping[t - 1]
    return (t[0], tuple(relabel(c, mapping) for c in t[1]))


def weight(t: Tree) -> int:
    """Number of internal nodes."""
    return 0 if is_leaf(t) else 1 + sum(weight(c) for c in t[1])


def node_generators(t: Tree) -> list[int]:
    """Generator indices in prefix order."""
    if is_leaf(t):
        return []
    out = [t[0]]
    for c in t[1]:
        out.extend(node_generators(c))
    return out


# generators and their symmetric-group actions ----------------------------------

def _as_matrix(rows) -> Matrix:
    return tuple(tuple(as_rational(x) for x in row) for row in rows)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum((a[r][k] * b[k][c] for k in range(n)), Fraction(0)) for c in range(n))
                 for r in range(n))


def _identity_matrix(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(r == c)) for c in range(n)) for r in range(n))


@dataclass(frozen=True)
class GeneratorSpec:
    """A generating operation.

    ``action`` holds one square matrix per adjacent transposition ``(j j+1)``
    of ``S_arity``, acting on the span of the non-free generators of this
    arity (in their order of appearance): ``g . (j j+1) = sum_h M[h][g] h``.
    ``None`` marks a free generator.
    """

    name: str
    arity: int
    cdeg: int = 0
    action: tuple[Matrix, ...] | None = None

    def __post_init__(self):
        if self.arity < 1:
            raise InputError(f"generator {self.name!r} must have arity >= 1")
        if self.cdeg < 0:
            raise InputError(f"generator {self.name!r} has negative degree")
        if self.action is not None:
            object.__setattr__(self, "action", tuple(_as_matrix(m) for m in self.action))
            if len(self.action) != self.arity - 1:
                raise InputError(
                    f"generator {self.name!r} needs {self.arity - 1} transposition matrices")

    @property
    def free(self) -> bool:
        return self.action is None and self.arity > 1


class Signature:
    """A list of generators plus the derived action data, validated on construction."""

    def __init__(self, generators: Sequence[GeneratorSpec]):
        self.generators: tuple[GeneratorSpec, ...] = tuple(generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise InputError("generator names must be distinct")
        # block of non-free generators per arity, and position inside it
        self.block: dict[int, list[int]] = {}
        self.position: dict[int, int] = {}
        for idx, g in enumerate(self.generators):
            if not g.free:
                members = self.block.setdefault(g.arity, [])
                self.position[idx] = len(members)
                members.append(idx)
        self.matrices: dict[int, tuple[Matrix, ...]] = {}
        for arity, members in self.block.items():
            self._validate_block(arity, members)
        self._act_cache: dict[tuple[int, tuple[int, ...]], tuple[tuple[int, Fraction], ...]] = {}

    def _validate_block(self, arity: int, members: list[int]) -> None:
        size = len(members)
        if arity == 1:
            self.matrices[arity] = ()
            return
        reference = None
        for idx in members:
            mats = self.generators[idx].action
            if any(len(m) != size or any(len(r) != size for r in m) for m in mats):
                raise InputError(
                    f"action matrices of {self.generators[idx].name!r} must be {size}x{size}, "
                    f"the number of non-free generators of arity {arity}")
            if reference is None:
                reference = mats
            elif mats != reference:
                raise InputError(f"non-free generators of arity {arity} disagree on their action")
        ident = _identity_matrix(size)
        for j, m in enumerate(reference):
            if _matmul(m, m) != ident:
                raise InputError(f"transposition matrix {j + 1} of arity {arity} is not an involution")
            if j + 1 < len(reference):
                n = reference[j + 1]
                if _matmul(_matmul(m, n), m) != _matmul(_matmul(n, m), n):
                    raise InputError(f"braid relation fails for matrices {j + 1},{j + 2}")
            for k in range(j + 2, len(reference)):
                n = reference[k]
                if _matmul(m, n) != _matmul(n, m):
                    raise InputError(f"matrices {j + 1} and {k + 1} do not commute")
        self.matrices[arity] = reference

    def __len__(self) -> int:
        return len(self.generators)

    def __eq__(self, other) -> bool:
        return isinstance(other, Signature) and self.generators == other.generators

    def __hash__(self) -> int:
        return hash(self.generators)

    def index(self, name: str) -> int:
        for idx, g in enumerate(self.generators):
            if g.name == name:
                return idx
        raise InputError(f"unknown generator {name!r}")

    def arity(self, idx: int) -> int:
        return self.generators[idx].arity

    def cdeg(self, t: Tree) -> int:
        return sum(self.generators[g].cdeg for g in node_generators(t))

    def act_generator(self, idx: int, sigma: perms.Perm) -> tuple[tuple[int, Fraction], ...]:
        """Expansion of ``g . sigma`` over the non-free block of ``g``."""
        key = (idx, sigma)
        cached = self._act_cache.get(key)
        if cached is not None:
            return cached
        g = self.generators[idx]
        members = self.block[g.arity]
        vec = [Fraction(0)] * len(members)
        vec[self.position[idx]] = Fraction(1)
        for j in perms.adjacent_word(sigma):
            m = self.matrices[g.arity][j - 1]
            vec = [sum((m[r][c] * vec[c] for c in range(len(vec))), Fraction(0))
                   for r in range(len(vec))]
        result = tuple((members[r], v) for r, v in enumerate(vec) if v)
        self._act_cache[key] = result
        return result

    # canonical form ---------------------------------------------------------
    def canonical(self, t: Tree) -> dict[Tree, Fraction]:
        """Expand ``t`` into a combination of canonical trees."""
        if is_leaf(t):
            return {t: Fraction(1)}
        idx, children = t
        g = self.generators[idx]
        if len(children) != g.arity:
            raise InputError(f"node {g.name!r} has {len(children)} children, arity is {g.arity}")
        expansions = [list(self.canonical(c).items()) for c in children]
        out: dict[Tree, Fraction] = {}
        for combo in product(*expansions):
            kids = tuple(c for c, _ in combo)
            coeff = Fraction(1)
            for _, a in combo:
                coeff *= a
            if g.free or g.arity == 1:
                _accumulate(out, (idx, kids), coeff)
                continue
            order = sorted(range(g.arity), key=lambda r: min_label(kids[r]))
            sorted_kids = tuple(kids[r] for r in order)
            sign = _koszul_sign_perm([self.cdeg(c) for c in kids], order)
            # g(y_1..y_k) = (g . pi^-1)(y_pi(1), .., y_pi(k)) with pi = order
            pi = tuple(r + 1 for r in order)
            for h, a in self.act_generator(idx, perms.inverse(pi)):
                _accumulate(out, (h, sorted_kids), sign * coeff * a)
        return out


def _accumulate(acc: dict, key, value: Fraction) -> None:
    v = acc.get(key, Fraction(0)) + value
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def _koszul_sign_perm(degrees: Sequence[int], order: Sequence[int]) -> int:
    """Sign of reordering items with ``degrees`` so that ``order[r]`` lands at slot ``r``."""
    odd_crossings = 0
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if order[a] > order[b] and degrees[order[a]] % 2 and degrees[order[b]] % 2:
                odd_crossings += 1
    return -1 if odd_crossings % 2 else 1


# operad elements -----------------------------------------------------------

class OperadElement:
    """Finite linear combination of canonical trees of a common arity."""

    __slots__ = ("signature", "arity", "terms")

    def __init__(self, signature: Signature, arity: int, terms: Mapping[Tree, Fraction] | None = None):
        self.signature = signature
        self.arity = arity
        self.terms: dict[Tree, Fraction] = {t: c for t, c in (terms or {}).items() if c}

    @classmethod
    def from_trees(cls, signature: Signature, arity: int,
                   trees: Iterable[tuple[object, Tree]]) -> "OperadElement":
        """Build from ``(coeff, tree)`` pairs, canonicalizing each tree."""
        acc: dict[Tree, Fraction] = {}
        for coeff, t in trees:
            labels = sorted(leaves(t))
            if labels != list(range(1, arity + 1)):
                raise InputError(f"tree leaves {labels} do not match arity {arity}")
            c = as_rational(coeff)
            for canon, a in signature.canonical(t).items():
                _accumulate(acc, canon, c * a)
        return cls(signature, arity, acc)

    def _check(self, other: "OperadElement") -> None:
        if self.signature != other.signature:
            raise InputError("operad elements over different generators")
        if self.arity != other.arity:
            raise InputError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other: "OperadElement") -> "OperadElement":
        self._check(other)
        acc = dict(self.terms)
        for t, c in other.terms.items():
            _accumulate(acc, t, c)
        return OperadElement(self.signature, self.arity, acc)

    def __neg__(self) -> "OperadElement":
        return self.scale(-1)

    def __sub__(self, other: "OperadElement") -> "OperadElement":
        return self + (-other)

    def scale(self, c) -> "OperadElement":
        c = as_rational(c)
        return OperadElement(self.signature, self.arity, {t: c * a for t, a in self.terms.items()})

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        return (isinstance(other, OperadElement) and self.signature == other.signature
                and self.arity == other.arity and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self.terms.items())))

    def __iter__(self) -> Iterator[tuple[Tree, Fraction]]:
        return iter(sorted(self.terms.items(), key=lambda tc: tree_key(tc[0])))

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        return f"OperadElement(arity={self.arity}, {format_element(self)})"

    # operadic structure -------------------------------------------------
    def compose(self, i: int, other: "OperadElement") -> "OperadElement":
        return partial_compose(self, i, other)

    def act(self, sigma: Sequence[int]) -> "OperadElement":
        return symmetric_act(self, sigma)


def unit(signature: Signature) -> OperadElement:
    """The identity operation: a single leaf."""
    return OperadElement(signature, 1, {1: Fraction(1)})


def generator(signature: Signature, which: int | str) -> OperadElement:
    idx = signature.index(which) if isinstance(which, str) else which
    k = signature.arity(idx)
    return OperadElement.from_trees(signature, k, [(1, (idx, tuple(range(1, k + 1))))])


def _prefix_cdeg_after_leaf(signature: Signature, t: Tree, label: int) -> int:
    """Total degree of the nodes that come after leaf ``label`` in prefix order."""
    seen = False
    total = 0

    def walk(node: Tree) -> None:
        nonlocal seen, total
        if is_leaf(node):
            if node == label:
                seen = True
            return
        if seen:
            total += signature.generators[node[0]].cdeg
        for c in node[1]:
            walk(c)

    walk(t)
    return total


def _graft(t: Tree, i: int, inner: Tree, n: int) -> Tree:
    if is_leaf(t):
        if t == i:
            return relabel(inner, {l: l + i - 1 for l in leaves(inner)})
        return t + n - 1 if t > i else t
    return (t[0], tuple(_graft(c, i, inner, n) for c in t[1]))


def partial_compose(t1: OperadElement, i: int, t2: OperadElement) -> OperadElement:
    """Bilinear grafting of ``t2`` into the leaf labelled ``i`` of ``t1``."""
    if t1.signature != t2.signature:
        raise InputError("operad elements over different generators")
    if not 1 <= i <= t1.arity:
        raise InputError(f"slot {i} out of range 1..{t1.arity}")
    sig = t1.signature
    n = t2.arity
    arity = t1.arity + n - 1
    acc: dict[Tree, Fraction] = {}
    for a, ca in t1.terms.items():
        after = _prefix_cdeg_after_leaf(sig, a, i)
        for b, cb in t2.terms.items():
            sign = -1 if (after * sig.cdeg(b)) % 2 else 1
            for canon, c in sig.canonical(_graft(a, i, b, n)).items():
                _accumulate(acc, canon, sign * ca * cb * c)
    return OperadElement(sig, arity, acc)


def symmetric_act(t: OperadElement, sigma: Sequence[int]) -> OperadElement:
    """Right action: the leaf labelled ``j`` becomes ``sigma(j)``."""
    sigma = perms.check(sigma)
    if len(sigma) != t.arity:
        raise InputError(f"permutation of size {len(sigma)} on an element of arity {t.arity}")
    acc: dict[Tree, Fraction] = {}
    for tree, c in t.terms.items():
        for canon, a in t.signature.canonical(relabel(tree, sigma)).items():
            _accumulate(acc, canon, c * a)
    return OperadElement(t.signature, t.arity, acc)


# tree-term view --------------------------------------------------------------

@dataclass(frozen=True)
class TreeTerm:
    """A planar shape (``None`` leaves), the labels read left to right, and a coefficient."""

    shape: object
    leafperm: tuple[int, ...]
    coeff: Fraction


def _shape(t: Tree):
    return None if is_leaf(t) else (t[0], tuple(_shape(c) for c in t[1]))


def _fill(shape, labels: Iterator[int]) -> Tree:
    if shape is None:
        return next(labels)
    return (shape[0], tuple(_fill(c, labels) for c in shape[1]))


def tree_terms(elem: OperadElement) -> list[TreeTerm]:
    return [TreeTerm(_shape(t), tuple(leaves(t)), c) for t, c in elem]


def from_tree_terms(signature: Signature, arity: int, terms: Iterable[TreeTerm]) -> OperadElement:
    return OperadElement.from_trees(
        signature, arity, [(tt.coeff, _fill(tt.shape, iter(tt.leafperm))) for tt in terms])


def format_tree(signature: Signature, t: Tree) -> str:
    if is_leaf(t):
        return str(t)
    name = signature.generators[t[0]].name
    return f"{name}(" + ",".join(format_tree(signature, c) for c in t[1]) + ")"


def format_element(elem: OperadElement) -> str:
    if elem.is_zero():
        return "0"
    parts = []
    for t, c in elem:
        parts.append(f"{c}*{format_tree(elem.signature, t)}")
    return " + ".join(parts)


# presentations -------------------------------------------------------------------

@dataclass(frozen=True)
class OperadPresentation:
    """Generators and relations of a (possibly graded, possibly k-ary) operad."""

    name: str
    signature: Signature
    relations: tuple[OperadElement, ...]
    graded: bool = False
    nonquadratic: bool = False
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        for r in self.relations:
            if r.signature != self.signature:
                raise InputError("relation built over a different signature")
        if not self.nonquadratic:
            for r in self.relations:
                if any(weight(t) > 2 for t in r.terms):
                    raise InputError(
                        "relations must be quadratic; mark the presentation nonquadratic otherwise")
        if not self.graded and any(g.cdeg for g in self.signature.generators):
            raise InputError("generators with nonzero degree need a graded presentation")

    @property
    def generators(self) -> tuple[GeneratorSpec, ...]:
        return self.signature.generators

    def generator(self, which: int | str) -> OperadElement:
        return generator(self.signature, which)

    def default_arity_bound(self) -> int:
        rel = max((r.arity for r in self.relations), default=0)
        gen = max((g.arity for g in self.generators), default=0)
        return max(rel + gen - 1, gen)


def composite_basis(pres: OperadPresentation | Signature, arity: int,
                    max_weight: int | None = None, bound: int | None = None) -> list[OperadElement]:
    """All canonical tree monomials of the given arity (each with coefficient 1).

    Unary generators make the set infinite, so trees are then limited to
    ``max_weight`` internal nodes (default 3).
    """
    if isinstance(pres, OperadPresentation):
        sig = pres.signature
        if bound is None:
            bound = pres.default_arity_bound()
    else:
        sig = pres
    if arity < 1:
        raise InputError("arity must be positive")
    if bound is not None and arity > bound:
        raise InputError(f"arity {arity} exceeds the configured bound {bound}")
    has_unary = any(g.arity == 1 for g in sig.generators)
    if max_weight is None:
        max_weight = 3 if has_unary else arity  # arity bounds the weight without unary nodes
    cache: dict[tuple[tuple[int, ...], int], list[Tree]] = {}

    def build(labels: tuple[int, ...], budget: int) -> list[Tree]:
        key = (labels, budget)
        if key in cache:
            return cache[key]
        out: list[Tree] = []
        if len(labels) == 1:
            out.append(labels[0])
        if budget >= 1:
            for idx, g in enumerate(sig.generators):
                if g.arity > len(labels):
                    continue
                for blocks in _split(labels, g.arity, ordered=g.free):
                    for kids in _children(blocks, budget - 1, build):
                        out.append((idx, kids))
        cache[key] = out
        return out

    trees = list(build(tuple(range(1, arity + 1)), max_weight))
    trees.sort(key=tree_key)
    return [OperadElement(sig, arity, {t: Fraction(1)}) for t in trees]


def _children(blocks, budget: int, build) -> Iterator[tuple[Tree, ...]]:
    """Child tuples whose total weight fits in ``budget``."""
    def rec(pos: int, remaining: int):
        if pos == len(blocks):
            yield ()
            return
        for t in build(blocks[pos], remaining):
            w = weight(t)
            for rest in rec(pos + 1, remaining - w):
                yield (t,) + rest
    yield from rec(0, budget)


def _split(labels: tuple[int, ...], k: int, ordered: bool) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Partitions of ``labels`` into ``k`` nonempty blocks.

    Unordered partitions list blocks by minimal element; ordered ones yield
    every arrangement of the blocks.
    """
    def rec(rest: tuple[int, ...], blocks: list[list[int]]):
        if not rest:
            if len(blocks) == k:
                yield tuple(tuple(b) for b in blocks)
            return
        head, tail = rest[0], rest[1:]
        for b in blocks:
            b.append(head)
            yield from rec(tail, blocks)
            b.pop()
        if len(blocks) < k:
            blocks.append([head])
            yield from rec(tail, blocks)
            blocks.pop()

    for part in rec(labels, []):
        if ordered:
            yield from arrangements(part)
        else:
            yield part


# JSON ------------------------------------------------------------------------------

def _tree_to_json(shape):
    """Planar shape to nested ``[genIndex, child, ..]`` with ``null`` leaves."""
    if shape is None:
        return None
    return [shape[0]] + [_tree_to_json(c) for c in shape[1]]


def _tree_from_json(data, n_generators: int):
    if data is None:
        return None
    if not isinstance(data, list) or not data or not isinstance(data[0], int):
        raise InputError(f"bad tree {data!r}")
    if not 0 <= data[0] < n_generators:
        raise InputError(f"generator index {data[0]} out of range")
    return (data[0], tuple(_tree_from_json(c, n_generators) for c in data[1:]))


def presentation_to_json(pres: OperadPresentation) -> dict:
    gens = []
    for g in pres.generators:
        entry = {"name": g.name, "arity": g.arity, "cdeg": g.cdeg}
        if g.action is not None:
            entry["action"] = [[[str(x) for x in row] for row in m] for m in g.action]
        else:
            entry["action"] = None
        gens.append(entry)
    relations = []
    for r in pres.relations:
        relations.append({
            "arity": r.arity,
            "terms": [{"coeff": str(tt.coeff), "tree": _tree_to_json(tt.shape),
                       "leafperm": list(tt.leafperm)} for tt in tree_terms(r)],
        })
    return {"name": pres.name, "graded": pres.graded, "nonquadratic": pres.nonquadratic,
            "generators": gens, "relations": relations}


def presentation_from_json(data: Mapping) -> OperadPresentation:
    try:
        specs = []
        for g in data["generators"]:
            action = g.get("action")
            specs.append(GeneratorSpec(str(g["name"]), int(g["arity"]), int(g.get("cdeg", 0)),
                                       None if action is None else tuple(action)))
        sig = Signature(specs)
        relations = []
        for rel in data.get("relations", []):
            terms = rel["terms"] if isinstance(rel, Mapping) else rel
            built = [TreeTerm(_tree_from_json(t["tree"], len(specs)), tuple(int(x) for x in t["leafperm"]),
                              as_rational(t["coeff"])) for t in terms]
            arity = int(rel["arity"]) if isinstance(rel, Mapping) and "arity" in rel else \
                len(built[0].leafperm)
            relations.append(from_tree_terms(sig, arity, built))
        graded = bool(data.get("graded", any(s.cdeg for s in specs)))
        return OperadPresentation(str(data.get("name", "custom")), sig, tuple(relations), graded=graded,
                                  nonquadratic=bool(data.get("nonquadratic", False)))
    except (KeyError, TypeError, ValueError, IndexError, StopIteration) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed operad file: {exc}") from exc
