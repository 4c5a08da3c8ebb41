"""Permutations over items ``1..n``, Kendall-tau distance and enumeration.

A permutation is a plain tuple of item ids, position 0 holding the
highest-ranked item. Item 1 is always the true best item. Tuples keep
permutations hashable and immutable, so they can be shared freely between
workers and used as dictionary keys in probability tables.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterator, Sequence

import numpy as np

Permutation = tuple[int, ...]

#: Largest universe that may be enumerated exhaustively (8! = 40320).
ENUMERATION_CAP = 8


class UniverseError(ValueError):
    """Raised when permutations or items do not share a universe."""


def as_permutation(order: Sequence[int]) -> Permutation:
    """Validate ``order`` as a bijection on ``{1..n}`` and return it as a tuple."""
    perm = tuple(int(x) for x in order)
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise UniverseError(f"{list(order)!r} is not a permutation of 1..{len(perm)}")
    return perm


def identity(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def rank_of(p: Permutation, item: int) -> int:
    """1-based position of ``item`` in ``p``."""
    return p.index(item) + 1


def check_same_universe(p: Sequence[int], q: Sequence[int]) -> None:
    if len(p) != len(q) or set(p) != set(q):
        raise UniverseError(f"permutations {p!r} and {q!r} are over different universes")


def kendall_tau(p: Sequence[int], q: Sequence[int]) -> int:
    """Number of item pairs ordered oppositely in ``p`` and ``q``."""
    check_same_universe(p, q)
    pos = {item: i for i, item in enumerate(q)}
    seq = [pos[item] for item in p]
    return inversions(seq)


def inversions(seq: Sequence[int]) -> int:
    """Count pairs ``i < j`` with ``seq[i] > seq[j]``."""
    count = 0
    for i, x in enumerate(seq):
        for y in seq[i + 1:]:
            if x > y:
                count += 1
    return count


def check_enumerable(n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if n > ENUMERATION_CAP:
        raise ValueError(f"n={n} exceeds the enumeration cap of {ENUMERATION_CAP}")


def enumerate_permutations(n: int) -> Iterator[Permutation]:
    """Yield all ``n!`` permutations of ``1..n`` in lexicographic order."""
    check_enumerable(n)
    return itertools.permutations(range(1, n + 1))


def top_k(p: Permutation, k: int) -> frozenset[int]:
    if not 1 <= k <= len(p):
        raise ValueError(f"k={k} out of range 1..{len(p)}")
    return frozenset(p[:k])


def swap_items(p: Permutation, a: int, b: int) -> Permutation:
    """Exchange the positions of items ``a`` and ``b`` in ``p``."""
    n = len(p)
    for item in (a, b):
        if not 1 <= item <= n:
            raise UniverseError(f"item {item} is not in the universe 1..{n}")
    swap = {a: b, b: a}
    return tuple(swap.get(x, x) for x in p)


def to_string(p: Sequence[int]) -> str:
    """Dash-joined rendering used in CSV and JSON files, e.g. ``3-1-2``."""
    return "-".join(str(x) for x in p)


def from_string(text: str) -> Permutation:
    return as_permutation([int(x) for x in text.split("-")])


# Array helpers used by the exact oracle and the vectorised samplers.
# Permutation arrays hold item ids (1-based) row-wise.


def permutation_array(n: int) -> np.ndarray:
    """All permutations of ``1..n`` as an ``(n!, n)`` int array, lexicographic rows."""
    check_enumerable(n)
    return np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int64)


def rank_array(perms: np.ndarray) -> np.ndarray:
    """Row-wise 0-based positions: ``out[r, item - 1]`` is where ``item`` sits in row ``r``."""
    perms = np.atleast_2d(perms)
    ranks = np.empty_like(perms)
    rows = np.arange(perms.shape[0])[:, None]
    ranks[rows, perms - 1] = np.arange(perms.shape[1])
    return ranks


def pair_disorder(perms: np.ndarray) -> np.ndarray:
    """Boolean ``(rows, n(n-1)/2)`` array; entry set when item pair ``i < j`` is reversed.

    Kendall-tau distance between two rows is the count of differing entries,
    and the distance to the identity is the row sum.
    """
    ranks = rank_array(perms)
    i, j = np.triu_indices(perms.shape[1], k=1)
    return ranks[:, i] > ranks[:, j]


def distance_matrix(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Kendall-tau distances between every row of ``left`` and every row of ``right``."""
    a = pair_disorder(left).astype(np.int32)
    b = pair_disorder(right).astype(np.int32)
    return a @ (1 - b).T + (1 - a) @ b.T


def lex_index(perms: np.ndarray) -> np.ndarray:
    """Position of each row within :func:`permutation_array` (Lehmer code)."""
    perms = np.atleast_2d(perms)
    n = perms.shape[1]
    index = np.zeros(perms.shape[0], dtype=np.int64)
    for i in range(n):
        smaller_after = (perms[:, i + 1:] < perms[:, i:i + 1]).sum(axis=1)
        index += smaller_after * math.factorial(n - 1 - i)
    return index
