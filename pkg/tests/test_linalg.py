import random
from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from tpq import linalg

small = st.integers(-3, 3).map(Fraction)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


@given(matrices())
def test_rank_matches_sympy(M):
    assert linalg.rank(M) == sympy.Matrix(M).rank()


@given(matrices())
def test_nullspace_is_kernel(M):
    n = len(M[0])
    basis = linalg.nullspace(M, n)
    assert len(basis) == n - sympy.Matrix(M).rank()
    for v in basis:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in M)


@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_or_certificate(M, rhs):
    rhs = rhs[: len(M)]
    sol = linalg.solve(M, rhs)
    if sol.solvable:
        assert [sum(a * b for a, b in zip(row, sol.x)) for row in M] == rhs
    else:
        y = linalg.left_null_certificate(M, rhs)
        cols = list(zip(*M))
        assert all(sum(a * b for a, b in zip(y, c)) == 0 for c in cols)
        assert sum(a * b for a, b in zip(y, rhs)) != 0


def test_inverse_against_sympy():
    rng = random.Random(5)
    done = 0
    while done < 20:
        M = [[Fraction(rng.randint(-4, 4)) for _ in range(4)] for _ in range(4)]
        S = sympy.Matrix(M)
        if S.det() == 0:
            continue
        inv = linalg.inverse(M)
        assert sympy.Matrix(inv) == S.inv()
        done += 1


def test_singular_inverse_raises():
    import pytest

    with pytest.raises(ValueError):
        linalg.inverse([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]])
