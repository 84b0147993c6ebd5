"""Permutations of {1..n} as one-line tuples.

``sigma[j-1]`` is the image of ``j``.  Products compose left to right:
``compose(s, t)`` applies ``s`` first, so right actions satisfy
``(x . s) . t = x . compose(s, t)``.
"""

from __future__ import annotations

from itertools import permutations as _itertools_permutations
from typing import Iterable, Sequence

from .errors import InputError

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def check(sigma: Sequence[int], n: int | None = None) -> Perm:
    sigma = tuple(int(x) for x in sigma)
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise InputError(f"{sigma!r} is not a permutation of 1..{len(sigma)}")
    if n is not None and len(sigma) != n:
        raise InputError(f"permutation {sigma!r} has size {len(sigma)}, expected {n}")
    return sigma


def compose(s: Perm, t: Perm) -> Perm:
    """The product ``s t`` with ``(s t)(j) = t(s(j))``."""
    if len(s) != len(t):
        raise InputError("cannot compose permutations of different sizes")
    return tuple(t[x - 1] for x in s)


def inverse(s: Perm) -> Perm:
    out = [0] * len(s)
    for j, x in enumerate(s, start=1):
        out[x - 1] = j
    return tuple(out)


def sign(s: Perm) -> int:
    inversions = sum(1 for a in range(len(s)) for b in range(a + 1, len(s)) if s[a] > s[b])
    return -1 if inversions % 2 else 1


def from_cycles(n: int, cycles: Iterable[Sequence[int]]) -> Perm:
    """Build from cycle notation, e.g. ``from_cycles(3, [(1, 2, 3)])`` maps 1->2->3->1."""
    image = list(range(1, n + 1))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            image[a - 1] = b
    return check(image, n)


def adjacent_word(s: Perm) -> list[int]:
    """Adjacent transpositions ``j`` (swapping j, j+1) whose left-to-right product is ``s``."""
    current = list(s)
    recorded: list[int] = []
    while True:
        position = {x: k for k, x in enumerate(current)}
        for j in range(1, len(current)):
            if position[j + 1] < position[j]:
                # right-multiplying by (j j+1) swaps the values j and j+1
                current[position[j]], current[position[j + 1]] = j + 1, j
                recorded.append(j)
                break
        else:
            break
    return recorded[::-1]


def transposition(n: int, j: int) -> Perm:
    image = list(range(1, n + 1))
    image[j - 1], image[j] = j + 1, j
    return tuple(image)


def block_substitute(sigma: Perm, i: int, tau: Perm) -> Perm:
    """Replace the entry ``i`` of ``sigma`` by the block ``i-1+tau`` and shift larger entries."""
    n = len(tau)
    out: list[int] = []
    for x in sigma:
        if x == i:
            out.extend(i - 1 + t for t in tau)
        elif x > i:
            out.append(x + n - 1)
        else:
            out.append(x)
    return tuple(out)


def all_permutations(n: int) -> list[Perm]:
    return [tuple(p) for p in _itertools_permutations(range(1, n + 1))]
