"""Brackets and differentials built from a bivector and a 3-form."""
from __future__ import annotations

from itertools import combinations

from .._alt import sort_sign
from ..expr import ChartMismatch, Expr
from .tensors import (
    Form,
    MultiVector,
    anchor_rows,
    differential,
    evaluate,
    exterior_derivative,
    interior_product,
    sharp,
    wedge,
)

__all__ = [
    "schouten_bracket",
    "lie_bracket",
    "lie_derivative",
    "koszul_bracket",
    "twisted_bracket_raw",
    "del_phi_raw",
    "function_bracket_raw",
    "divergence",
]


def _same(a, b):
    if a.chart != b.chart:
        raise ChartMismatch("operands live on different charts")


def _acc(d, key, val):
    old = d.get(key)
    d[key] = val if old is None else old + val


def schouten_bracket(P: MultiVector, Q: MultiVector) -> MultiVector:
    """Schouten-Nijenhuis bracket.

    Multivectors are read as superfunctions in odd variables ``theta_i``
    standing for ``d_i``, and

        [P, Q] = sum_i  dP/dtheta_i . d_i Q  -  (-1)^((p-1)(q-1)) dQ/dtheta_i . d_i P

    with right derivatives in ``theta``.  On vector fields this is the Lie
    bracket ``[X, Y] = XY - YX``.
    """
    if not isinstance(P, MultiVector) or not isinstance(Q, MultiVector):
        raise TypeError("schouten bracket acts on multivectors")
    _same(P, Q)
    p, q = P.grade, Q.grade
    acc: dict = {}
    _half(P, Q, 1, acc)
    _half(Q, P, -1 if ((p - 1) * (q - 1)) % 2 == 0 else 1, acc)
    return MultiVector._make(P.chart, p + q - 1, acc) if p + q >= 1 else MultiVector.zero(P.chart, 0)


def _half(A, B, outer, acc):
    # outer * sum_i (dA/dtheta_i) . d_i B, odd variables kept in that order
    a = A.grade
    derivs: dict = {}
    for J, b in B.comps.items():
        for m in range(B.chart.dim):
            db = b.diff(m)
            if not db.is_zero():
                derivs.setdefault(m, []).append((J, db))
    for I, c in A.comps.items():
        for k, m in enumerate(I):
            if m not in derivs:
                continue
            sgn = outer if (a - 1 - k) % 2 == 0 else -outer
            rest = I[:k] + I[k + 1:]
            for J, db in derivs[m]:
                s, K = sort_sign(rest + J)
                if s == 0:
                    continue
                val = c * db
                _acc(acc, K, val if s * sgn > 0 else -val)


def lie_bracket(X: MultiVector, Y: MultiVector) -> MultiVector:
    return schouten_bracket(X, Y)


def lie_derivative(X: MultiVector, eta: Form) -> Form:
    """Cartan formula ``L_X = i_X d + d i_X``."""
    _same(X, eta)
    out = interior_product(X, exterior_derivative(eta))
    if eta.grade > 0:
        out = out + exterior_derivative(interior_product(X, eta))
    return out


def function_bracket_raw(L: MultiVector, f, g) -> Expr:
    """``{f, g} = L(df, dg)``."""
    return evaluate(L, differential(f, L.chart), differential(g, L.chart))


def koszul_bracket(L: MultiVector, alpha: Form, beta: Form) -> Form:
    """``L_{L#a} b - L_{L#b} a - d L(a, b)``."""
    _same(L, alpha)
    _same(L, beta)
    if alpha.grade != 1 or beta.grade != 1:
        raise ValueError("koszul bracket acts on 1-forms")
    out = lie_derivative(sharp(L, alpha), beta) - lie_derivative(sharp(L, beta), alpha)
    return out - differential(evaluate(L, alpha, beta), L.chart)


def twisted_bracket_raw(L: MultiVector, phi: Form, alpha: Form, beta: Form) -> Form:
    """Koszul bracket plus ``phi(L#a, L#b, .)``."""
    out = koszul_bracket(L, alpha, beta)
    if phi.is_zero():
        return out
    return out + interior_product(sharp(L, beta), interior_product(sharp(L, alpha), phi))


def del_phi_raw(L: MultiVector, phi: Form, P: MultiVector) -> MultiVector:
    """Lichnerowicz-type differential on multivectors.

    On basis coforms ``a_0..a_k``:

        (dP)(a_0..a_k) = sum_i (-1)^i L#(a_i) P(..^a_i..)
                       + sum_{i<j} (-1)^(i+j) P({a_i, a_j}^phi, ..^a_i..^a_j..)
    """
    if not isinstance(P, MultiVector):
        raise TypeError("del_phi acts on multivectors")
    _same(L, P)
    chart = L.chart
    n = chart.dim
    k = P.grade
    rows = anchor_rows(L)
    cobasis = [Form.basis(chart, c) for c in chart.coordinates]
    brackets: dict = {}

    def bracket(i, j):
        if (i, j) not in brackets:
            brackets[(i, j)] = twisted_bracket_raw(L, phi, cobasis[i], cobasis[j])
        return brackets[(i, j)]

    def anchor_on(i, e: Expr) -> Expr:
        out = Expr.zero(chart)
        for m, lam in rows[i].items():
            d = e.diff(m)
            if not d.is_zero():
                out = out + lam * d
        return out

    acc: dict = {}
    for J in combinations(range(n), k + 1):
        val = Expr.zero(chart)
        for i in range(k + 1):
            comp = P.comps.get(J[:i] + J[i + 1:])
            if comp is not None:
                t = anchor_on(J[i], comp)
                val = val - t if i % 2 else val + t
        if k >= 1:
            for i in range(k + 1):
                for j in range(i + 1, k + 1):
                    rest = J[:i] + J[i + 1:j] + J[j + 1:]
                    gamma = bracket(J[i], J[j])
                    t = Expr.zero(chart)
                    for (m,), g in gamma.comps.items():
                        s, K = sort_sign((m,) + rest)
                        if s == 0:
                            continue
                        comp = P.comps.get(K)
                        if comp is not None:
                            t = t + g * comp if s > 0 else t - g * comp
                    val = val - t if (i + j) % 2 else val + t
        if not val.is_zero():
            acc[J] = val
    return MultiVector._make(chart, k + 1, acc)


def divergence(X: MultiVector) -> Expr:
    """Coordinate divergence ``sum_m d_m X^m`` against the flat density."""
    if X.grade != 1:
        raise ValueError("divergence of a vector field only")
    out = Expr.zero(X.chart)
    for (m,), v in X.comps.items():
        out = out + v.diff(m)
    return out


def decomposable_schouten(xs: list, ys: list) -> MultiVector:
    """Oracle for ``[X_1^..^X_p, Y_1^..^Y_q]`` via

        sum_{i,j} (-1)^(i+j) [X_i, Y_j] ^ X_1..^X_i..X_p ^ Y_1..^Y_j..Y_q

    (indices 1-based).  Only used for cross-checks.
    """
    chart = xs[0].chart if xs else ys[0].chart
    p, q = len(xs), len(ys)
    out = MultiVector.zero(chart, p + q - 1)
    for i in range(p):
        for j in range(q):
            t = lie_bracket(xs[i], ys[j])
            for a in range(p):
                if a != i:
                    t = wedge(t, xs[a])
            for b in range(q):
                if b != j:
                    t = wedge(t, ys[b])
            out = out + (t if (i + j) % 2 == 0 else -t)
    return out
