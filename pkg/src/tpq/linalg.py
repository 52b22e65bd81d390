"""Exact Gaussian elimination over any field whose elements support
``+ - * /`` and ``== 0`` (``Fraction``, or constant :class:`~tpq.expr.Expr`).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = ["rref", "rank", "nullspace", "solve", "left_null_certificate", "inverse", "Solution"]


def _copy(rows):
    return [list(r) for r in rows]


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form; returns ``(matrix, pivot_columns)``."""
    m = _copy(rows)
    if not m:
        return m, []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c] if not hasattr(m[r][c], "inverse") else m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols: int) -> list[list]:
    """Basis of ``{x : rows @ x = 0}``, one vector per free column."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    m, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in enumerate(piv):
            v[pc] = -m[r][f]
        basis.append(v)
    return basis


@dataclass
class Solution:
    solvable: bool
    x: list | None = None
    certificate: list | None = None


def left_null_certificate(rows, rhs) -> list | None:
    """A vector ``y`` with ``y @ rows = 0`` and ``y @ rhs != 0``, if one exists."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [Fraction(int(i == j)) for j in range(nrows)] for i, r in enumerate(rows)]
    m, piv = rref(aug, ncols)
    # rows of m beyond the pivot rank have zero left block; their identity
    # part records the row combination that produced them
    for r in range(len(piv), nrows):
        y = m[r][ncols:]
        if sum((a * b for a, b in zip(y, rhs)), Fraction(0)) != 0:
            return y
    return None


def solve(rows, rhs) -> Solution:
    """Exact solution of ``rows @ x = rhs`` or an infeasibility certificate."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    m, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return Solution(False, certificate=left_null_certificate(rows, rhs))
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(piv):
        x[pc] = m[r][ncols]
    return Solution(True, x=x)


def inverse(rows):
    n = len(rows)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    m, piv = rref(aug, n)
    if piv != list(range(n)):
        raise ValueError("matrix is singular")
    return [r[n:] for r in m]
