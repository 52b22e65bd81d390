import random
from fractions import Fraction
from itertools import combinations, product
from math import comb

import pytest
import sympy
from sympy.combinatorics import Permutation
from hypothesis import given
from hypothesis import strategies as st

from tpq.expr import ChartSignature, OpaqueSymbol
from tpq.liealg import (
    AlgForm,
    AlgMultiVector,
    LieAlgebraError,
    LieAlgebraModel,
    algebraic_del_phi,
    algebraic_schouten,
    algebraic_twisted_bracket,
    alg_sharp,
    build_gl_subalgebra,
    build_matrix_subalgebra,
    ce_differential,
    ce_matrix,
    check_twisted_structure,
    closed_two_forms,
    del_phi_matrix,
    evaluate,
    ltp_cohomology,
    solve_prequantization,
    span_contains,
)

G = build_gl_subalgebra([1, 2], [1, 2, 3])
V = lambda *n: AlgMultiVector.basis(G, *n)  # noqa: E731
F = lambda *n: AlgForm.basis(G, *n)  # noqa: E731
R6 = V("e11", "e22") + V("e13", "e23")
PHI6 = -(F("e11") + F("e22")).wedge(F("e13")).wedge(F("e23"))


def unit(a, b, n=3):
    return sympy.Matrix(n, n, lambda i, j: int((i + 1, j + 1) == (a, b)))


def commutator_oracle(L):
    """Structure constants from explicit matrix commutators of ``e_ab``."""
    mats = [unit(int(nm[1]), int(nm[2])) for nm in L.names]
    flat = sympy.Matrix([[m[k] for k in range(9)] for m in mats]).T
    out = {}
    for i, j in product(range(L.dim), repeat=2):
        c = mats[i] * mats[j] - mats[j] * mats[i]
        sol = flat.solve(sympy.Matrix([c[k] for k in range(9)]))
        out[(i, j)] = [Fraction(int(x.p), int(x.q)) for x in sol]
    return out


# --- algebras ------------------------------------------------------------------


def test_gl_subalgebra_example():
    assert G.dim == 6
    br = G.bracket_basis(G.index("e12"), G.index("e21"))
    assert br == {G.index("e11"): 1, G.index("e22"): -1}


@pytest.mark.parametrize("rows,cols", [([1, 2], [1, 2, 3]), ([1, 2, 3], [1, 2, 3]), ([1], [1, 2, 3])])
def test_structure_constants_match_matrix_commutators(rows, cols):
    L = build_gl_subalgebra(rows, cols)
    oracle = commutator_oracle(L)
    for (i, j), vec in oracle.items():
        assert [L.structure_constant(i, j, k) for k in range(L.dim)] == vec


def test_one_dimensional_abelian():
    L = build_gl_subalgebra([1], [1])
    assert L.dim == 1 and L.is_abelian()


def test_non_closed_span_rejected():
    with pytest.raises(LieAlgebraError):
        build_matrix_subalgebra([(1, 2), (2, 1)])


def test_jacobi_checked_on_construction():
    with pytest.raises(LieAlgebraError):
        LieAlgebraModel(["a", "b", "c"], {("a", "b"): {"c": 1}, ("b", "c"): {"a": 1}, ("a", "c"): {"a": 1}})


# --- CE differential -------------------------------------------------------------


def test_ce_examples():
    assert ce_differential(PHI6).is_zero()
    assert ce_differential(F("e12", "e21")).is_zero()
    A = LieAlgebraModel(["a", "b", "c"], {})
    xi = AlgForm.basis(A, "a", "b") + AlgForm.basis(A, "c") * 0
    assert ce_differential(xi).is_zero()


def brute_ce_matrix(L, k):
    """CE matrix from the defining formula and the structure constants only."""
    src = list(combinations(range(L.dim), k))
    dst = list(combinations(range(L.dim), k + 1))
    M = sympy.zeros(len(dst), len(src))
    pos = {I: c for c, I in enumerate(src)}
    for r, J in enumerate(dst):
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                rest = J[:i] + J[i + 1:j] + J[j + 1:]
                for m in range(L.dim):
                    c = L.structure_constant(J[i], J[j], m)
                    if c == 0:
                        continue
                    idx = (m,) + rest
                    if len(set(idx)) < len(idx):
                        continue
                    order = sorted(range(len(idx)), key=lambda a: idx[a])
                    sgn = Permutation(order).signature()
                    M[r, pos[tuple(sorted(idx))]] += (-1) ** (i + j) * sgn * sympy.Rational(c.numerator, c.denominator)
    return M


@pytest.mark.parametrize("rows,cols", [([1, 2], [1, 2]), ([1, 2], [1, 2, 3])])
def test_ce_matrix_against_brute_force(rows, cols):
    L = build_gl_subalgebra(rows, cols)
    for k in range(0, 3):
        assert sympy.Matrix(ce_matrix(L, k)) == brute_ce_matrix(L, k)


@pytest.mark.parametrize("rows,cols", [([1, 2], [1, 2]), ([1, 2], [1, 2, 3]), ([1, 2, 3], [1, 2, 3])])
def test_ce_square_zero(rows, cols):
    L = build_gl_subalgebra(rows, cols)
    for k in range(0, 3):
        assert sympy.Matrix(ce_matrix(L, k + 1)) * sympy.Matrix(ce_matrix(L, k)) == sympy.zeros(
            comb(L.dim, k + 2), comb(L.dim, k)
        )


# --- closed forms ----------------------------------------------------------------


def test_closed_two_forms_gl2_rank_oracle():
    L = build_gl_subalgebra([1, 2], [1, 2])
    M = brute_ce_matrix(L, 2)
    assert len(closed_two_forms(L)) == comb(4, 2) - M.rank()


def test_closed_two_forms_abelian():
    A = LieAlgebraModel(["a", "b", "c", "d"], {})
    assert len(closed_two_forms(A)) == 6


def test_ex6_closed_two_forms():
    closed = closed_two_forms(G)
    assert len(closed) == 15 - brute_ce_matrix(G, 2).rank() == 5
    h = F("e11") - F("e22")
    listed = [h.wedge(F("e12")), h.wedge(F("e21")), F("e12", "e21")]
    for x in listed:
        assert ce_differential(x).is_zero()
        assert span_contains(closed, x)
    # the two closed forms outside the listed span, each with r#(Phi) != 0
    extra = [F("e11", "e13") + F("e12", "e23"), -F("e13", "e21") + F("e22", "e23")]
    assert alg_sharp(R6, extra[0]) == V("e22", "e23")
    assert alg_sharp(R6, extra[1]) == V("e11", "e13")
    for x in extra:
        assert span_contains(closed, x) and not span_contains(listed, x)
    for x in listed:
        assert alg_sharp(R6, x).is_zero()


# --- Schouten, structures, brackets ----------------------------------------------------


def test_algebraic_schouten_examples():
    assert algebraic_schouten(V("e11"), V("e12")) == V("e12")
    A = LieAlgebraModel(["a", "b", "c"], {})
    assert algebraic_schouten(AlgMultiVector.basis(A, "a", "b"), AlgMultiVector.basis(A, "c")).is_zero()


def test_ex6_structure():
    rep = check_twisted_structure(R6, PHI6)
    assert rep.ok
    assert algebraic_schouten(R6, R6) * Fraction(1, 2) == alg_sharp(R6, PHI6)


def random_element(cls, L, grade, rng):
    return cls.from_vector(L, grade, [Fraction(rng.randint(-2, 2)) for _ in range(comb(L.dim, grade))])


@given(st.integers(0, 2 ** 32 - 1))
def test_algebraic_schouten_antisymmetry_and_leibniz(seed):
    rng = random.Random(seed)
    p, q, r = rng.randint(1, 2), rng.randint(1, 2), rng.randint(1, 2)
    P, Q, R = (random_element(AlgMultiVector, G, g, rng) for g in (p, q, r))
    assert algebraic_schouten(P, Q) == algebraic_schouten(Q, P) * (-(-1) ** ((p - 1) * (q - 1)))
    lhs = algebraic_schouten(P, Q.wedge(R))
    rhs = algebraic_schouten(P, Q).wedge(R) + Q.wedge(algebraic_schouten(P, R)) * (-1) ** ((p - 1) * q)
    assert lhs == rhs


def test_twisted_bracket_on_ex6_basis():
    # {e13*, e23*}^phi only has e11*, e22* parts whatever the coefficients
    br = algebraic_twisted_bracket(R6, PHI6, F("e13"), F("e23"))
    assert set(br.comps) <= {(G.index("e11"),), (G.index("e22"),)}


# --- d_phi ----------------------------------------------------------------------------


LAM = ["l11", "l12", "l13", "l21", "l22", "l23"]
PSIG = ChartSignature((), opaque=tuple(OpaqueSymbol(n) for n in LAM))


def symbolic_Z():
    return AlgMultiVector(G, 1, {(i,): PSIG.fn(n) for i, n in enumerate(LAM)})


def interior_first(Z, phi):
    """``i_Z phi`` built from evaluation, independent of the package."""
    comps = {}
    for a, b in combinations(range(G.dim), 2):
        ea, eb = AlgMultiVector(G, 1, {(a,): 1}), AlgMultiVector(G, 1, {(b,): 1})
        comps[(a, b)] = evaluate(phi, Z, ea, eb)
    return AlgForm(G, 2, comps)


def test_del_phi_on_vectors_oracle():
    Z = symbolic_Z()
    one = PSIG.const(1)
    rE = R6.map(lambda v: one * v)
    oracle = algebraic_schouten(rE, Z) - alg_sharp(rE, interior_first(Z, PHI6.map(lambda v: one * v)))
    assert algebraic_del_phi(R6, PHI6, Z) == oracle


def test_ex6_expansion_frozen():
    """``r + d_phi Z`` for ``Z = sum l_ab e_ab`` (computed, see the oracle test above)."""
    Z = symbolic_Z()
    l = {n: PSIG.fn(n) for n in LAM}
    one = PSIG.const(1)
    got = R6.map(lambda v: one * v) + algebraic_del_phi(R6, PHI6, Z)
    expect = (
        V("e11", "e12") * -l["l12"]
        + V("e11", "e13") * -l["l13"]
        + V("e11", "e21") * l["l21"]
        + V("e11", "e22") * one
        + V("e12", "e22") * l["l12"]
        + V("e13", "e23") * one
        + V("e21", "e22") * -l["l21"]
        + V("e22", "e23") * l["l23"]
    )
    assert got == expect


def test_del_phi_scalar_and_square():
    assert algebraic_del_phi(R6, PHI6, AlgMultiVector.from_vector(G, 0, [Fraction(3)])).is_zero()
    e11 = V("e11")
    assert algebraic_del_phi(R6, PHI6, algebraic_del_phi(R6, PHI6, e11)).is_zero()


def test_del_phi_square_zero_all_degrees():
    for k in range(0, 5):
        A = sympy.Matrix(del_phi_matrix(R6, PHI6, k + 1))
        B = sympy.Matrix(del_phi_matrix(R6, PHI6, k))
        assert (A * B).is_zero_matrix


# --- prequantization ------------------------------------------------------------------


def test_ex6_unsolvable_with_certificate():
    res = solve_prequantization(R6, PHI6)
    assert not res.solvable
    assert res.certificate == F("e13", "e23")
    assert res.certificate_valid(R6, PHI6)
    assert "integrality: assumed" in res.assumptions


def test_exact_case_solvable():
    X = V("e12") + V("e21") * 2
    r = algebraic_del_phi(AlgMultiVector.zero(G, 2), AlgForm.zero(G, 3), X)
    assert check_twisted_structure(r, AlgForm.zero(G, 3)).ok
    res = solve_prequantization(r, AlgForm.zero(G, 3))
    assert res.solvable
    assert (r + algebraic_del_phi(r, AlgForm.zero(G, 3), res.Z) - alg_sharp(r, res.Phi)).is_zero()


def test_trivial_solvable():
    res = solve_prequantization(AlgMultiVector.zero(G, 2), AlgForm.zero(G, 3))
    assert res.solvable and res.Z.is_zero() and res.Phi.is_zero()


@given(st.integers(0, 2 ** 32 - 1))
def test_solver_soundness(seed):
    rng = random.Random(seed)
    L = build_gl_subalgebra([1, 2], [1, 2])
    r = random_element(AlgMultiVector, L, 2, rng)
    phi = AlgForm.zero(L, 3)
    if not check_twisted_structure(r, phi).ok:
        return
    res = solve_prequantization(r, phi)
    if res.solvable:
        assert (r + algebraic_del_phi(r, phi, res.Z) - alg_sharp(r, res.Phi)).is_zero()
        assert ce_differential(res.Phi).is_zero()
    else:
        assert res.certificate_valid(r, phi)


# --- cohomology ----------------------------------------------------------------------


def test_cohomology_abelian():
    A = LieAlgebraModel(["a", "b", "c", "d"], {})
    r, phi = AlgMultiVector.zero(A, 2), AlgForm.zero(A, 3)
    assert [ltp_cohomology(r, phi, k) for k in range(5)] == [comb(4, k) for k in range(5)]


def test_ex6_cohomology_rank_oracle():
    dims = []
    for k in range(7):
        out = sympy.Matrix(del_phi_matrix(R6, PHI6, k)).rank() if k < 6 else 0
        inc = sympy.Matrix(del_phi_matrix(R6, PHI6, k - 1)).rank() if k else 0
        dims.append(comb(6, k) - out - inc)
        assert ltp_cohomology(R6, PHI6, k) == dims[-1]
    assert dims == [1, 2, 2, 2, 1, 0, 0]
