"""Index bookkeeping shared by chart tensors and Lie-algebra elements."""
from __future__ import annotations

from itertools import permutations


def sort_sign(seq) -> tuple[int, tuple]:
    """Sign of the permutation sorting ``seq`` and the sorted tuple.

    Returns ``(0, ())`` when ``seq`` has a repeated entry.
    """
    s = list(seq)
    n = len(s)
    if len(set(s)) != n:
        return 0, ()
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, n):
        j = i
        while j > 0 and s[j - 1] > s[j]:
            s[j - 1], s[j] = s[j], s[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(s)


def perm_sign(p) -> int:
    return sort_sign(p)[0]


_PERMS: dict = {}


def signed_permutations(k: int):
    if k not in _PERMS:
        _PERMS[k] = [(perm_sign(p), p) for p in permutations(range(k))]
    return _PERMS[k]


def check_index(idx, dim: int, grade: int) -> tuple:
    idx = tuple(idx)
    if len(idx) != grade:
        raise ValueError(f"index tuple {idx} does not have length {grade}")
    if any(not 0 <= i < dim for i in idx):
        raise ValueError(f"index tuple {idx} out of range for dimension {dim}")
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise ValueError("indices must be strictly increasing")
    return idx
