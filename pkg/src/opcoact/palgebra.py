"""Finite-dimensional algebras given by structure constants.

Basis elements are indexed 0-based internally.  A graded algebra has its
basis ordered by degree; ``basis_label(j)`` recovers the 1-based pair
``(p, i)``.  Operations are stored as sparse tensors mapping an input tuple
to a sparse output vector.

Evaluation in a graded algebra follows the Koszul rule: permuting inputs
contributes the sign of the odd/odd crossings, and an operation of odd
degree picks up ``(-1)^(inputs to its left)`` when applied inside a tree.
With every degree zero both signs disappear.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from . import permutations as perms
from .errors import InputError
from .operad import (OperadElement, OperadPresentation, Tree, is_leaf, leaves)
from .polyring import as_rational

Vector = dict[int, Fraction]
Entries = dict[tuple[int, ...], Vector]


@dataclass(frozen=True)
class StructureTensor:
    arity: int
    entries: Mapping[tuple[int, ...], Mapping[int, Fraction]]

    def __post_init__(self):
        clean = {k: dict(v) for k, v in self.entries.items() if any(v.values())}
        for v in clean.values():
            for s in [s for s, c in v.items() if not c]:
                del v[s]
        object.__setattr__(self, "entries", clean)

    def get(self, inputs: Sequence[int]) -> Vector:
        return dict(self.entries.get(tuple(inputs), {}))

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        return (isinstance(other, StructureTensor) and self.arity == other.arity
                and self.entries == other.entries)


@dataclass
class StructureAlgebra:
    """Structure constants of an algebra; ``dims`` has one entry per degree when graded."""

    name: str
    dims: tuple[int, ...]
    graded: bool
    operations: dict[str, StructureTensor]
    op_cdeg: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if any(d < 0 for d in self.dims):
            raise InputError("dimensions must be non-negative")
        if not self.graded and len(self.dims) != 1:
            raise InputError("an ungraded algebra has a single dimension")
        self.degrees: tuple[int, ...] = tuple(p for p, d in enumerate(self.dims) for _ in range(d))
        self.offsets: tuple[int, ...] = tuple(sum(self.dims[:p]) for p in range(len(self.dims)))
        n = self.dim
        for op, tensor in self.operations.items():
            for inputs, out in tensor.entries.items():
                if len(inputs) != tensor.arity or any(not 0 <= j < n for j in inputs):
                    raise InputError(f"operation {op!r}: input {inputs} out of range")
                if any(not 0 <= s < n for s in out):
                    raise InputError(f"operation {op!r}: output index out of range")
                if self.graded:
                    expected = sum(self.degrees[j] for j in inputs) + self.op_cdeg.get(op, 0)
                    for s in out:
                        if self.degrees[s] != expected:
                            raise InputError(
                                f"operation {op!r} breaks degree additivity at input "
                                f"{[self.basis_label(j) for j in inputs]}")

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def basis_label(self, j: int):
        """1-based user-facing label: ``s`` or ``(p, i)``."""
        if not self.graded:
            return j + 1
        p = self.degrees[j]
        return (p, j - self.offsets[p] + 1)

    def basis_index(self, label) -> int:
        if not self.graded:
            j = int(label) - 1
            if not 0 <= j < self.dim:
                raise InputError(f"basis index {label} out of range 1..{self.dim}")
            return j
        p, i = (int(x) for x in label)
        if not (0 <= p < len(self.dims) and 1 <= i <= self.dims[p]):
            raise InputError(f"basis label {label} out of range")
        return self.offsets[p] + i - 1

    def tensor(self, op: str, arity: int | None = None) -> StructureTensor:
        t = self.operations.get(op)
        if t is None:
            if arity is None:
                raise InputError(f"algebra {self.name!r} has no operation {op!r}")
            return StructureTensor(arity, {})
        return t

    def with_operations(self, operations: Mapping[str, StructureTensor]) -> "StructureAlgebra":
        return StructureAlgebra(self.name, self.dims, self.graded, dict(operations), dict(self.op_cdeg))


def ungraded(name: str, dim: int, operations: Mapping[str, Mapping], shorthand: str = "none") -> StructureAlgebra:
    """Convenience constructor from 1-based ``{op: {(i1,..): {s: c}}}`` data."""
    return _build(name, (dim,), False, operations, shorthand, {})


def graded(name: str, dims: Sequence[int], operations: Mapping[str, Mapping],
           shorthand: str = "none", op_cdeg: Mapping[str, int] | None = None) -> StructureAlgebra:
    """Convenience constructor from ``{op: {((p,i),..): {(p,i): c}}}`` data."""
    return _build(name, tuple(dims), True, operations, shorthand, dict(op_cdeg or {}))


def _build(name, dims, is_graded, operations, shorthand, op_cdeg) -> StructureAlgebra:
    probe = StructureAlgebra(name, dims, is_graded, {}, op_cdeg)
    tensors = {}
    for op, data in operations.items():
        entries: Entries = {}
        arity = None
        for inputs, out in data.items():
            idx = tuple(probe.basis_index(x) for x in inputs)
            if arity is None:
                arity = len(idx)
            elif arity != len(idx):
                raise InputError(f"operation {op!r} mixes arities")
            vec = entries.setdefault(idx, {})
            for s, c in out.items():
                j = probe.basis_index(s)
                vec[j] = vec.get(j, Fraction(0)) + as_rational(c)
        if arity is None:
            continue
        entries = expand_shorthand(entries, shorthand, probe.degrees)
        tensors[op] = StructureTensor(arity, entries)
    return StructureAlgebra(name, dims, is_graded, tensors, op_cdeg)


def expand_shorthand(entries: Entries, shorthand: str, degrees: Sequence[int]) -> Entries:
    """Fill in permuted inputs for (anti)symmetric operations; conflicts are errors."""
    if shorthand in (None, "none"):
        return entries
    if shorthand not in ("antisymmetric", "symmetric"):
        raise InputError(f"unknown shorthand {shorthand!r}")
    out: Entries = {k: dict(v) for k, v in entries.items()}
    given = set(entries)
    for inputs, vec in entries.items():
        for sigma in perms.all_permutations(len(inputs)):
            permuted = tuple(inputs[x - 1] for x in sigma)
            # f(a_sigma) = eps * koszul * f(a) for a (skew-)symmetric f
            factor = koszul_sign([degrees[j] for j in inputs], sigma)
            if shorthand == "antisymmetric":
                factor *= perms.sign(sigma)
            image = {s: factor * c for s, c in vec.items()}
            if permuted in given:
                if {s: c for s, c in image.items() if c} != {s: c for s, c in entries[permuted].items() if c}:
                    raise InputError(f"shorthand conflicts with explicit entry at {permuted}")
                continue
            out[permuted] = image
    return out


def koszul_sign(degrees: Sequence[int], sigma: Sequence[int]) -> int:
    """Sign of rearranging items of the given degrees into the order ``sigma(1), .., sigma(n)``."""
    odd = 0
    n = len(sigma)
    for a in range(n):
        for b in range(a + 1, n):
            if sigma[a] > sigma[b] and degrees[sigma[a] - 1] % 2 and degrees[sigma[b] - 1] % 2:
                odd += 1
    return -1 if odd % 2 else 1


# evaluation ---------------------------------------------------------------------

def _bind(alg: StructureAlgebra, pres: OperadPresentation) -> list[StructureTensor]:
    """Tensors in generator order; validates names, arities, degrees and flags."""
    if alg.graded != pres.graded:
        raise InputError(
            f"algebra is {'graded' if alg.graded else 'ungraded'} but presentation "
            f"{pres.name!r} is {'graded' if pres.graded else 'ungraded'}")
    names = {g.name for g in pres.generators}
    for op in alg.operations:
        if op not in names:
            raise InputError(f"operation {op!r} is not a generator of {pres.name!r}")
    tensors = []
    for g in pres.generators:
        t = alg.tensor(g.name, g.arity)
        if t.arity != g.arity:
            raise InputError(f"operation {g.name!r} has arity {t.arity}, expected {g.arity}")
        if alg.graded and alg.op_cdeg.get(g.name, g.cdeg) != g.cdeg:
            raise InputError(f"operation {g.name!r} declares degree {alg.op_cdeg[g.name]}, "
                             f"the presentation says {g.cdeg}")
        if alg.graded and g.cdeg and not alg.op_cdeg.get(g.name):
            _check_additivity(alg, g.name, t, g.cdeg)
        tensors.append(t)
    return tensors


def _check_additivity(alg: StructureAlgebra, op: str, t: StructureTensor, cdeg: int) -> None:
    for inputs, out in t.entries.items():
        expected = sum(alg.degrees[j] for j in inputs) + cdeg
        if any(alg.degrees[s] != expected for s in out):
            raise InputError(f"operation {op!r} breaks degree additivity")


def _eval_planar(alg: StructureAlgebra, tensors: Sequence[StructureTensor], cdegs: Sequence[int],
                 t: Tree) -> dict[tuple[int, ...], Vector]:
    """Sparse tensor keyed by inputs in planar order."""
    n = alg.dim
    if is_leaf(t):
        return {(j,): {j: Fraction(1)} for j in range(n)}
    idx, children = t
    op = tensors[idx]
    child_tables = [_eval_planar(alg, tensors, cdegs, c) for c in children]
    child_cdeg = [_subtree_cdeg(c, cdegs) for c in children]
    degrees = alg.degrees
    out: dict[tuple[int, ...], Vector] = {}
    for combo in product(*(table.items() for table in child_tables)):
        inputs = tuple(j for key, _ in combo for j in key)
        sign = 1
        left_degree = 0
        for r, (key, _) in enumerate(combo):
            if child_cdeg[r] % 2 and left_degree % 2:
                sign = -sign
            left_degree += sum(degrees[j] for j in key)
        # expand the product of child output vectors against the node tensor
        acc: Vector = {}
        for picks in product(*(vec.items() for _, vec in combo)):
            coeff = Fraction(sign)
            for _, c in picks:
                coeff *= c
            image = op.entries.get(tuple(s for s, _ in picks))
            if not image:
                continue
            for s, c in image.items():
                acc[s] = acc.get(s, Fraction(0)) + coeff * c
        acc = {s: c for s, c in acc.items() if c}
        if acc:
            out[inputs] = acc
    return out


def _subtree_cdeg(t: Tree, cdegs: Sequence[int]) -> int:
    if is_leaf(t):
        return 0
    return cdegs[t[0]] + sum(_subtree_cdeg(c, cdegs) for c in t[1])


def _eval_with(alg: StructureAlgebra, tensors: Sequence[StructureTensor], cdegs: Sequence[int],
               elem: OperadElement) -> StructureTensor:
    acc: dict[tuple[int, ...], Vector] = {}
    for t, coeff in elem.terms.items():
        labels = leaves(t)
        for planar_inputs, vec in _eval_planar(alg, tensors, cdegs, t).items():
            inputs = [0] * elem.arity
            for pos, label in enumerate(labels):
                inputs[label - 1] = planar_inputs[pos]
            sign = koszul_sign([alg.degrees[j] for j in inputs], labels)
            slot = acc.setdefault(tuple(inputs), {})
            for s, c in vec.items():
                slot[s] = slot.get(s, Fraction(0)) + sign * coeff * c
    return StructureTensor(elem.arity, acc)


def eval_tree(alg: StructureAlgebra, elem: OperadElement, pres: OperadPresentation) -> StructureTensor:
    """Structure tensor of the operation ``elem`` in ``alg``."""
    if elem.signature != pres.signature:
        raise InputError("element and presentation use different generators")
    tensors = _bind(alg, pres)
    cdegs = [g.cdeg for g in pres.generators]
    return _eval_with(alg, tensors, cdegs, elem)


def permute_tensor(alg: StructureAlgebra, t: StructureTensor, sigma: Sequence[int]) -> StructureTensor:
    """Tensor of ``f . sigma``: ``(f . sigma)(a) = koszul * f(a_sigma(1), .., a_sigma(n))``."""
    out: dict[tuple[int, ...], Vector] = {}
    for inputs, vec in t.entries.items():
        # inputs are the arguments of f; find a with a_sigma(r) = inputs[r]
        a = [0] * t.arity
        for r, x in enumerate(sigma):
            a[x - 1] = inputs[r]
        sign = koszul_sign([alg.degrees[j] for j in a], sigma)
        out[tuple(a)] = {s: sign * c for s, c in vec.items()}
    return StructureTensor(t.arity, out)


def contract(alg: StructureAlgebra, outer: StructureTensor, i: int, inner: StructureTensor,
             inner_cdeg: int = 0) -> StructureTensor:
    """Tensor of ``outer o_i inner`` by direct contraction, with the Koszul rule."""
    n = alg.dim
    m, k = outer.arity, inner.arity
    out: dict[tuple[int, ...], Vector] = {}
    for inputs in product(range(n), repeat=m + k - 1):
        middle = inputs[i - 1:i - 1 + k]
        left_degree = sum(alg.degrees[j] for j in inputs[:i - 1])
        sign = -1 if (inner_cdeg % 2 and left_degree % 2) else 1
        acc: Vector = {}
        for p, c in inner.entries.get(middle, {}).items():
            outer_in = inputs[:i - 1] + (p,) + inputs[i - 1 + k:]
            for s, d in outer.entries.get(outer_in, {}).items():
                acc[s] = acc.get(s, Fraction(0)) + sign * c * d
        acc = {s: c for s, c in acc.items() if c}
        if acc:
            out[inputs] = acc
    return StructureTensor(m + k - 1, out)


# checks ----------------------------------------------------------------------------

@dataclass
class AxiomReport:
    relation_violations: dict[int, list[tuple]]
    action_violations: list[tuple[str, int, tuple]]

    @property
    def passed(self) -> bool:
        return not any(self.relation_violations.values()) and not self.action_violations


def check_axioms(alg: StructureAlgebra, pres: OperadPresentation) -> AxiomReport:
    """Evaluate every relation and the generator symmetries on all basis tuples."""
    tensors = _bind(alg, pres)
    cdegs = [g.cdeg for g in pres.generators]
    relation_violations: dict[int, list[tuple]] = {}
    for r, rel in enumerate(pres.relations):
        t = _eval_with(alg, tensors, cdegs, rel)
        relation_violations[r] = sorted(tuple(alg.basis_label(j) for j in key) for key in t.entries)
    action_violations = []
    sig = pres.signature
    for idx, g in enumerate(pres.generators):
        if g.free or g.arity == 1:
            continue
        for j in range(1, g.arity):
            sigma = perms.transposition(g.arity, j)
            lhs: dict[tuple[int, ...], Vector] = {}
            for h, coeff in sig.act_generator(idx, sigma):
                for key, vec in tensors[h].entries.items():
                    slot = lhs.setdefault(key, {})
                    for s, c in vec.items():
                        slot[s] = slot.get(s, Fraction(0)) + coeff * c
            lhs_t = StructureTensor(g.arity, lhs)
            rhs_t = permute_tensor(alg, tensors[idx], sigma)
            for key in sorted(set(lhs_t.entries) | set(rhs_t.entries)):
                if lhs_t.entries.get(key, {}) != rhs_t.entries.get(key, {}):
                    action_violations.append((g.name, j, tuple(alg.basis_label(x) for x in key)))
    return AxiomReport(relation_violations, action_violations)


def apply_matrix(f: Sequence[Sequence[Fraction]], vec: Mapping[int, Fraction]) -> Vector:
    out: Vector = {}
    for j, c in vec.items():
        for r in range(len(f)):
            if f[r][j]:
                out[r] = out.get(r, Fraction(0)) + f[r][j] * c
    return {r: c for r, c in out.items() if c}


def check_morphism(f: Sequence[Sequence], src: StructureAlgebra, dst: StructureAlgebra,
                   pres: OperadPresentation) -> bool:
    """True iff ``f(mu(a..)) = mu(f(a)..)`` on all basis tuples for every generator."""
    return not morphism_violations(f, src, dst, pres)


def morphism_violations(f: Sequence[Sequence], src: StructureAlgebra, dst: StructureAlgebra,
                        pres: OperadPresentation) -> list[tuple[str, tuple]]:
    f = [[as_rational(x) for x in row] for row in f]
    if len(f) != dst.dim or any(len(row) != src.dim for row in f):
        raise InputError(f"matrix must be {dst.dim}x{src.dim}")
    src_t = _bind(src, pres)
    dst_t = _bind(dst, pres)
    columns = [{r: f[r][j] for r in range(dst.dim) if f[r][j]} for j in range(src.dim)]
    bad = []
    for g, ts, td in zip(pres.generators, src_t, dst_t):
        for inputs in product(range(src.dim), repeat=g.arity):
            lhs = apply_matrix(f, ts.entries.get(inputs, {}))
            rhs: Vector = {}
            for picks in product(*(columns[j].items() for j in inputs)):
                coeff = Fraction(1)
                for _, c in picks:
                    coeff *= c
                for s, c in td.entries.get(tuple(p for p, _ in picks), {}).items():
                    rhs[s] = rhs.get(s, Fraction(0)) + coeff * c
            rhs = {s: c for s, c in rhs.items() if c}
            if lhs != rhs:
                bad.append((g.name, tuple(src.basis_label(j) for j in inputs)))
    return bad


# JSON ---------------------------------------------------------------------------------

def _label_from_json(x, is_graded: bool):
    if is_graded:
        if isinstance(x, str):
            parts = x.strip("()[] ").split(",")
            return tuple(int(p) for p in parts)
        return tuple(int(p) for p in x)
    return int(x)


def algebra_from_json(data: Mapping) -> StructureAlgebra:
    try:
        name = str(data.get("name", "algebra"))
        if "dims" in data:
            dims = tuple(int(d) for d in data["dims"])
            is_graded = True
        else:
            dims = (int(data["dim"]),)
            is_graded = False
        default_shorthand = data.get("shorthand", "none")
        operations: dict[str, dict] = {}
        op_cdeg: dict[str, int] = {}
        shorthands: dict[str, str] = {}
        for op, spec in data.get("operations", {}).items():
            entries = {}
            for entry in spec.get("entries", []):
                inputs = tuple(_label_from_json(x, is_graded) for x in entry["in"])
                out = {_label_from_json(s, is_graded): c for s, c in entry["out"].items()}
                if inputs in entries:
                    raise InputError(f"duplicate entry for {op!r} at {inputs}")
                entries[inputs] = out
            operations[op] = entries
            if "cdeg" in spec:
                op_cdeg[op] = int(spec["cdeg"])
            shorthands[op] = spec.get("shorthand", default_shorthand)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"malformed algebra file: {exc}") from exc
    tensors = {}
    for op, data_op in operations.items():
        built = _build(name, dims, is_graded, {op: data_op}, shorthands[op], op_cdeg)
        tensors.update(built.operations)
        if op not in built.operations:
            tensors[op] = StructureTensor(_declared_arity(data, op), {})
    return StructureAlgebra(name, dims, is_graded, tensors, op_cdeg)


def _declared_arity(data: Mapping, op: str) -> int:
    arity = data["operations"][op].get("arity")
    if arity is None:
        raise InputError(f"operation {op!r} has no entries; give its 'arity'")
    return int(arity)


def algebra_to_json(alg: StructureAlgebra) -> dict:
    def label(j):
        lab = alg.basis_label(j)
        return list(lab) if alg.graded else lab

    def out_key(j):
        lab = alg.basis_label(j)
        return f"{lab[0]},{lab[1]}" if alg.graded else str(lab)

    ops = {}
    for op in sorted(alg.operations):
        t = alg.operations[op]
        entries = [
            {"in": [label(j) for j in inputs],
             "out": {out_key(s): str(c) for s, c in sorted(vec.items())}}
            for inputs, vec in sorted(t.entries.items())
        ]
        spec = {"arity": t.arity, "entries": entries}
        if op in alg.op_cdeg:
            spec["cdeg"] = alg.op_cdeg[op]
        ops[op] = spec
    data = {"name": alg.name}
    if alg.graded:
        data["dims"] = list(alg.dims)
    else:
        data["dim"] = alg.dims[0]
    data["operations"] = ops
    data["shorthand"] = "none"
    return data
