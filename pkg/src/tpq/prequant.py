"""Contravariant derivatives on a trivial Hermitian line bundle over a chart.

A section is a scalar :class:`~tpq.expr.Expr` (the coefficient of the unit
section).  The bundle carries a purely imaginary connection form ``omega``
and a real vector field ``Z``, and

    D_a s = L#(a) s + <omega, L#a> s + 2 pi i <a, Z> s.

The local field with ``D_a 1 = <a, X>`` is ``X = -L#(omega) + 2 pi i Z``.
"""
from __future__ import annotations

from fractions import Fraction

from .expr import I, PI, ChartMismatch, Expr, as_expr
from .geom import (
    Form,
    MultiVector,
    TwistedPoissonStructure,
    del_phi,
    differential,
    evaluate,
    exterior_derivative,
    function_bracket,
    interior_product,
    koszul_bracket,
    pairing,
    sharp,
    twisted_bracket,
)
from .report import Report, residuals_of

__all__ = [
    "LineBundleModel",
    "D_apply",
    "derivation",
    "curvature",
    "untwisted_curvature",
    "local_field",
    "pi_bivector",
    "check_prequantization",
    "fhat_apply",
    "twisted_commutator",
    "homomorphism_residual",
    "hermitian_residual",
    "exact_model",
]

TWO_PI_I = 2 * PI * I


class LineBundleModel:
    """Trivial line bundle with metric ``h(s1, s2) = s1 conj(s2)``.

    ``omega`` must be purely imaginary and ``Z`` real unless
    ``hermitian=False``.
    """

    __slots__ = ("structure", "omega", "Z")

    def __init__(
        self,
        structure: TwistedPoissonStructure,
        omega: Form | None = None,
        Z: MultiVector | None = None,
        *,
        hermitian: bool = True,
    ):
        chart = structure.chart
        omega = Form.zero(chart, 1) if omega is None else omega
        Z = MultiVector.zero(chart, 1) if Z is None else Z
        if not isinstance(omega, Form) or omega.grade != 1 and not omega.is_zero():
            raise TypeError("connection form must be a 1-form")
        if not isinstance(Z, MultiVector) or Z.grade != 1 and not Z.is_zero():
            raise TypeError("Z must be a vector field")
        if omega.chart != chart or Z.chart != chart:
            raise ChartMismatch("bundle data live on a different chart")
        if hermitian:
            if not (omega.conjugate() + omega).is_zero():
                raise ValueError("connection form is not purely imaginary")
            if not (Z.conjugate() - Z).is_zero():
                raise ValueError("Z is not real")
        self.structure = structure
        self.omega = omega
        self.Z = Z

    @property
    def chart(self):
        return self.structure.chart

    @property
    def Lambda(self) -> MultiVector:
        return self.structure.Lambda


def derivation(X: MultiVector, s) -> Expr:
    """``X(s) = sum_m X^m d_m s``."""
    s = as_expr(s, X.chart)
    out = Expr.zero(X.chart)
    for (m,), v in X.comps.items():
        d = s.diff(m)
        if not d.is_zero():
            out = out + v * d
    return out


def D_apply(B: LineBundleModel, alpha: Form, s) -> Expr:
    s = as_expr(s, B.chart)
    v = sharp(B.Lambda, alpha)
    out = derivation(v, s)
    c = pairing(B.omega, v) + TWO_PI_I * pairing(alpha, B.Z)
    return out + c * s


def curvature(B: LineBundleModel, alpha: Form, beta: Form, s) -> Expr:
    """``C_D(a, b) s = D_a D_b s - D_b D_a s - D_{{a,b}^phi} s``."""
    br = twisted_bracket(B.structure, alpha, beta)
    return D_apply(B, alpha, D_apply(B, beta, s)) - D_apply(B, beta, D_apply(B, alpha, s)) - D_apply(B, br, s)


def untwisted_curvature(B: LineBundleModel, alpha: Form, beta: Form, s) -> Expr:
    """Same as :func:`curvature` with the Koszul bracket in place of ``{,}^phi``."""
    br = koszul_bracket(B.Lambda, alpha, beta)
    return D_apply(B, alpha, D_apply(B, beta, s)) - D_apply(B, beta, D_apply(B, alpha, s)) - D_apply(B, br, s)


def local_field(B: LineBundleModel) -> MultiVector:
    """``X`` with ``D_a 1 = <a, X>``, read off from ``D`` on coordinate coforms."""
    chart = B.chart
    one = Expr.one(chart)
    comps = {}
    for m, name in enumerate(chart.coordinates):
        comps[(m,)] = D_apply(B, Form.basis(chart, name), one)
    return MultiVector(chart, 1, comps)


def pi_bivector(B: LineBundleModel) -> MultiVector:
    """``Pi = del_phi X`` for the local field ``X`` of ``D``."""
    return del_phi(B.structure, local_field(B))


def check_prequantization(S: TwistedPoissonStructure, Z: MultiVector, Phi: Form) -> Report:
    """Residuals of ``d Phi`` and ``L + del_phi Z - L#(Phi)``."""
    rep = Report("prequantization", assumptions=["integrality: assumed"])
    rep.extend(residuals_of(exterior_derivative(Phi), "dPhi"))
    rep.extend(residuals_of(S.Lambda + del_phi(S, Z) - sharp(S.Lambda, Phi), "condition"))
    return rep


def fhat_apply(B: LineBundleModel, f, s) -> Expr:
    """``f^(s) = D_{df} s + 2 pi i f s``."""
    f = as_expr(f, B.chart)
    return D_apply(B, differential(f, B.chart), s) + TWO_PI_I * f * as_expr(s, B.chart)


def _twist_form(B: LineBundleModel, f, g) -> Form:
    S = B.structure
    if S.phi.is_zero():
        return Form.zero(B.chart, 1)
    vf = sharp(S.Lambda, differential(f, B.chart))
    vg = sharp(S.Lambda, differential(g, B.chart))
    return interior_product(vg, interior_product(vf, S.phi))


def twisted_commutator(B: LineBundleModel, f, g, s) -> Expr:
    """``[f^, g^]^phi (s) = (f^ g^ - g^ f^)(s) - D_{phi(L#df, L#dg, .)} s``."""
    comm = fhat_apply(B, f, fhat_apply(B, g, s)) - fhat_apply(B, g, fhat_apply(B, f, s))
    return comm - D_apply(B, _twist_form(B, f, g), s)


def homomorphism_residual(B: LineBundleModel, f, g, s) -> Expr:
    """``{f,g}^(s) - [f^, g^]^phi(s)``; equals ``-(C_D(df,dg) + 2 pi i {f,g}) s``."""
    fg = function_bracket(B.structure, f, g)
    return fhat_apply(B, fg, s) - twisted_commutator(B, f, g, s)


def hermitian_residual(B: LineBundleModel, alpha: Form, s1, s2) -> Expr:
    """``L#(a)(s1 conj s2) - (D_a s1) conj s2 - s1 conj(D_a s2)`` for real ``a``."""
    s1 = as_expr(s1, B.chart)
    s2 = as_expr(s2, B.chart)
    lhs = derivation(sharp(B.Lambda, alpha), s1 * s2.conjugate())
    return lhs - D_apply(B, alpha, s1) * s2.conjugate() - s1 * D_apply(B, alpha, s2).conjugate()


def exact_model(S: TwistedPoissonStructure, X0: MultiVector) -> LineBundleModel:
    """Prequantization bundle of an exact structure ``L = del_phi X0``.

    Uses ``omega = 0`` and ``Z = -X0``, so ``C_D = 2 pi i del_phi Z = -2 pi i L``.
    """
    if not (del_phi(S, X0) - S.Lambda).is_zero():
        raise ValueError("the structure is not del_phi of the given field")
    return LineBundleModel(S, None, -X0)
