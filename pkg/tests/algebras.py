"""Test algebras shared by the suite, written from their textbook multiplication tables."""

from __future__ import annotations

from opcoact import palgebra

# Lie algebras (bracket named "c"; only one of each antisymmetric pair is listed)
L2 = {(1, 2): {1: 1}}                                         # [e1,e2] = e1
HEISENBERG = {(1, 2): {3: 1}}                                 # [x,y] = z
SL2 = {(1, 2): {3: 1}, (3, 1): {1: 2}, (3, 2): {2: -2}}      # e, f, h

# binary products named "mu", every entry listed
DUAL_NUMBERS = {(1, 1): {1: 1}, (1, 2): {2: 1}, (2, 1): {2: 1}}          # K[t]/(t^2)
UPPER_TRIANGULAR = {                                                       # E11, E12, E22
    (1, 1): {1: 1}, (1, 2): {2: 1}, (2, 3): {2: 1}, (3, 3): {3: 1},
}
TRUNCATED_CUBIC = {(1, 1): {1: 1}, (1, 2): {2: 1}, (2, 1): {2: 1}, (1, 3): {3: 1},   # K[t]/(t^3)
                   (3, 1): {3: 1}, (2, 2): {3: 1}}
MATRIX_2X2 = {                                                             # E11, E12, E21, E22
    (r * 2 + c + 1, c2 * 2 + d + 1): {r * 2 + d + 1: 1}
    for r in range(2) for c in range(2) for c2 in range(2) for d in range(2) if c == c2
}
RIGHT_LEIBNIZ = {(1, 1): {1: -1, 2: -1}, (1, 2): {1: 1, 2: 1}}
RIGHT_PRELIE = {(1, 1): {2: -1}, (1, 2): {2: 1}, (2, 1): {1: -1}, (2, 2): {1: 1}}
ZINBIEL2 = {(1, 1): {2: 1}}


def lie(name: str, dim: int, table: dict) -> palgebra.StructureAlgebra:
    return palgebra.ungraded(name, dim, {"c": table}, "antisymmetric")


def binary(name: str, dim: int, table: dict, op: str = "mu") -> palgebra.StructureAlgebra:
    return palgebra.ungraded(name, dim, {op: table})


def direct_sum(table1: dict, dim1: int, table2: dict) -> dict:
    shifted = {tuple(x + dim1 for x in k): {s + dim1: c for s, c in v.items()} for k, v in table2.items()}
    return {**table1, **shifted}


def abelian(dim: int, op: str = "c", arity: int = 2) -> palgebra.StructureAlgebra:
    return palgebra.StructureAlgebra(f"abelian{dim}", (dim,), False,
                                     {op: palgebra.StructureTensor(arity, {})})


def as_mu(alg: palgebra.StructureAlgebra, old: str = "c") -> palgebra.StructureAlgebra:
    """Same structure constants, operation renamed to ``mu``."""
    ops = {("mu" if k == old else k): v for k, v in alg.operations.items()}
    return palgebra.StructureAlgebra(alg.name, alg.dims, alg.graded, ops, dict(alg.op_cdeg))


def l2():
    return lie("l2", 2, L2)


def heisenberg():
    return lie("heisenberg", 3, HEISENBERG)


def sl2():
    return lie("sl2", 3, SL2)


def dual_numbers():
    return binary("dual_numbers", 2, DUAL_NUMBERS)


def upper_triangular():
    return binary("upper_triangular", 3, UPPER_TRIANGULAR)


def leibniz2():
    return binary("leibniz2", 2, RIGHT_LEIBNIZ)


def prelie2():
    return binary("prelie2", 2, RIGHT_PRELIE)


def zinbiel2():
    return binary("zinbiel2", 2, ZINBIEL2)



def truncated_cubic():
    return binary("truncated_cubic", 3, TRUNCATED_CUBIC)


def matrix_2x2():
    return binary("matrix_2x2", 4, MATRIX_2X2)


def l2_plus_l2():
    return lie("l2_plus_l2", 4, direct_sum(L2, 2, L2))


def leibniz2_plus_line():
    return binary("leibniz2_plus_line", 3, RIGHT_LEIBNIZ)


def tass1():
    return palgebra.ungraded("tass1", 1, {"mu": {(1, 1, 1): {1: 1}}})


def ternary_nilpotent():
    return palgebra.ungraded("ternary2", 2, {"mu": {(1, 1, 1): {2: 1}}})


def graded_lie_xy():
    """H0 = Kx, H1 = Ky, [x,y] = y."""
    return palgebra.graded("graded_lie_xy", [1, 1], {"c": {((0, 1), (1, 1)): {(1, 1): 1}}},
                           "antisymmetric")


def odd_square():
    """H1 = Kx, H2 = Kz, [x,x] = z: only valid with Koszul signs."""
    return palgebra.graded("odd_square", [0, 1, 1], {"c": {((1, 1), (1, 1)): {(2, 1): 1}}})


LIE_ALGEBRAS = (l2, heisenberg, sl2)


def perturbations(alg: palgebra.StructureAlgebra):
    """Every copy of ``alg`` with one raw structure constant (zero or not) increased by 1."""
    import itertools
    for op, tensor in alg.operations.items():
        for inputs in itertools.product(range(alg.dim), repeat=tensor.arity):
            for out in range(alg.dim):
                entries = {k: dict(v) for k, v in tensor.entries.items()}
                row = entries.setdefault(inputs, {})
                row[out] = row.get(out, 0) + 1
                yield (op, inputs, out), alg.with_operations(
                    {op: palgebra.StructureTensor(tensor.arity, entries)})
