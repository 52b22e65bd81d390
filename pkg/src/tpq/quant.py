"""Polarizations, quantizable observables and half-density operators.

Half-density sections are written ``1 (x) chi beta`` against the flat basis
half-density ``beta`` of the chart, so ``L_X(chi beta) = (X chi + chi/2 div X) beta``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .expr import ChartMismatch, Expr, ExprError, as_expr
from .geom import (
    Form,
    TwistedPoissonStructure,
    differential,
    divergence,
    evaluate,
    interior_product,
    sharp,
    twisted_bracket,
)
from .prequant import TWO_PI_I, D_apply, LineBundleModel, fhat_apply
from .report import Report, Residual

__all__ = [
    "NotIsotropic",
    "Polarization",
    "check_polarization",
    "membership_residual",
    "quantizable_pair_check",
    "HalfDensitySection",
    "half_density_D",
    "quantum_operator",
    "density_integrand",
]

_HALF = Fraction(1, 2)


class NotIsotropic(ValueError):
    pass


def _is_constant_form(a: Form) -> bool:
    return all(v.is_constant() for v in a.comps.values())


def _label(a: Form) -> str:
    names = a.chart.coordinates
    parts = [f"{v}*d{names[i]}" if v != 1 else f"d{names[i]}" for (i,), v in a.items()]
    return " + ".join(parts) or "0"


class Polarization:
    """Span of 1-forms ``generators`` together with a complement.

    The complement must consist of constant-coefficient 1-forms; when it is
    not supplied and the generators are constant, coordinate coforms are
    added greedily until the two lists form a basis.  Isotropy
    ``L(a_i, a_j) = 0`` is checked on construction unless ``unchecked``.
    """

    def __init__(
        self,
        structure: TwistedPoissonStructure,
        generators: list[Form],
        complement: list[Form] | None = None,
        *,
        unchecked: bool = False,
    ):
        chart = structure.chart
        for a in generators:
            if not isinstance(a, Form) or (a.grade != 1 and not a.is_zero()):
                raise TypeError("polarization generators must be 1-forms")
            if a.chart != chart:
                raise ChartMismatch("generator lives on a different chart")
        self.structure = structure
        self.generators = list(generators)
        if complement is None:
            complement = self._auto_complement()
        for c in complement:
            if not isinstance(c, Form) or c.grade != 1:
                raise TypeError("complement entries must be 1-forms")
            if not _is_constant_form(c):
                raise ValueError("complement not constant-coefficient")
        self.complement = list(complement)
        if len(self.generators) + len(self.complement) != chart.dim:
            raise ValueError("generators and complement do not form a basis")
        M = [[a[(m,)] for m in range(chart.dim)] for a in self.generators + self.complement]
        try:
            self._inv = linalg.inverse(M)
        except ValueError:
            raise ValueError("generators and complement do not form a basis") from None
        except ExprError:
            raise ValueError("cannot split off the complement exactly (non-monomial pivot)") from None
        if not unchecked:
            bad = self.isotropy_residuals()
            if bad:
                raise NotIsotropic(f"not isotropic: {bad[0].where} = {bad[0].expr}")

    @property
    def chart(self):
        return self.structure.chart

    def _auto_complement(self) -> list[Form]:
        chart = self.structure.chart
        if not all(_is_constant_form(a) for a in self.generators):
            raise ValueError("complement not constant-coefficient: supply one explicitly")

        cur = [[a[(m,)] for m in range(chart.dim)] for a in self.generators]
        base = linalg.rank(cur) if cur else 0
        out = []
        for m, name in enumerate(chart.coordinates):
            trial = cur + [[Expr.rational(int(j == m), 0, chart) for j in range(chart.dim)]]
            if linalg.rank(trial) > base:
                cur, base = trial, base + 1
                out.append(Form.basis(chart, name))
        return out

    def isotropy_residuals(self) -> list[Residual]:
        out = []
        L = self.structure.Lambda
        for i, a in enumerate(self.generators):
            for j in range(i + 1, len(self.generators)):
                v = evaluate(L, a, self.generators[j])
                if not v.is_zero():
                    out.append(Residual(f"Lambda(a{i + 1},a{j + 1})", v))
        return out

    def split(self, gamma: Form) -> list[Expr]:
        """Coefficients of ``gamma`` along the complement."""
        chart = self.chart
        g = [gamma[(m,)] for m in range(chart.dim)]
        k = len(self.generators)
        out = []
        for c in range(k, chart.dim):
            v = Expr.zero(chart)
            for m in range(chart.dim):
                w = self._inv[m][c]
                if w != 0:
                    v = v + g[m] * w
            out.append(v)
        return out

    def complement_labels(self) -> list[str]:
        return [_label(c) for c in self.complement]


def check_polarization(P: Polarization) -> Report:
    """Isotropy residuals and the parts of ``{a_i, a_j}^phi`` off ``span(P)``."""
    rep = Report("polarization")
    rep.extend(P.isotropy_residuals())
    gens = P.generators
    labels = P.complement_labels()
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            br = twisted_bracket(P.structure, gens[i], gens[j])
            for lab, v in zip(labels, P.split(br)):
                if not v.is_zero():
                    rep.residuals.append(Residual(f"{{a{i + 1},a{j + 1}}}^phi along {lab}", v))
    return rep


def membership_residual(P: Polarization, gamma: Form) -> list[Residual]:
    """Components of ``{gamma, a}^phi`` along the complement, for every generator ``a``."""
    out = []
    labels = P.complement_labels()
    for k, a in enumerate(P.generators):
        br = twisted_bracket(P.structure, gamma, a)
        for lab, v in zip(labels, P.split(br)):
            if not v.is_zero():
                out.append(Residual(f"{{gamma,a{k + 1}}}^phi along {lab}", v))
    return out


def quantizable_pair_check(P: Polarization, g1, g2) -> Report:
    """Pair condition: ``{phi(L#dg1, L#dg2, .), a}^phi`` stays in ``span(P)``."""
    chart = P.chart
    g1, g2 = as_expr(g1, chart), as_expr(g2, chart)
    rep = Report("quantizable-pair")
    if g1 == g2:
        rep.error = "diagonal pair: the two observables must differ"
        return rep
    for name, g in (("g1", g1), ("g2", g2)):
        pre = membership_residual(P, differential(g, chart))
        if pre:
            rep.error = f"precondition violated: {name} is not in P(P)"
            rep.details[name] = [r.as_dict() for r in pre]
            return rep
    S = P.structure
    theta = interior_product(
        sharp(S.Lambda, differential(g2, chart)),
        interior_product(sharp(S.Lambda, differential(g1, chart)), S.phi),
    ) if not S.phi.is_zero() else Form.zero(chart, 1)
    labels = P.complement_labels()
    for k, a in enumerate(P.generators):
        br = twisted_bracket(S, theta, a)
        for lab, v in zip(labels, P.split(br)):
            if not v.is_zero():
                rep.residuals.append(Residual(f"{{theta,a{k + 1}}}^phi along {lab}", v))
    return rep


@dataclass(frozen=True)
class HalfDensitySection:
    """``1 (x) chi beta``."""

    chi: Expr


def _chi(B, s) -> Expr:
    if isinstance(s, HalfDensitySection):
        return as_expr(s.chi, B.chart)
    return as_expr(s, B.chart)


def half_density_D(B: LineBundleModel, alpha: Form, s) -> HalfDensitySection:
    """``D_a(1 (x) chi beta) = (D_a chi + chi/2 div L#a) beta``."""
    chi = _chi(B, s)
    v = sharp(B.Lambda, alpha)
    return HalfDensitySection(D_apply(B, alpha, chi) + chi * divergence(v) * _HALF)


def quantum_operator(B: LineBundleModel, g, s) -> HalfDensitySection:
    """``g^(1 (x) chi beta) = (g^(chi) + chi/2 div L#dg) beta``.

    For ``omega = Z = 0`` this is ``2 pi i g chi + L(dg, dchi) + chi/2 div L#dg``.
    """
    chi = _chi(B, s)
    g = as_expr(g, B.chart)
    v = sharp(B.Lambda, differential(g, B.chart))
    return HalfDensitySection(fhat_apply(B, g, chi) + chi * divergence(v) * _HALF)


def density_integrand(B: LineBundleModel, s1, s2) -> Expr:
    """``h(s1, s2) rho_1 conj(rho_2)`` as a multiple of the flat density."""
    return _chi(B, s1) * _chi(B, s2).conjugate()
