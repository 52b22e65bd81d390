"""Twisted Poisson structures and their residual checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..expr import ChartMismatch, ChartSignature, Expr
from .. import linalg
from ..report import Residual, residuals_of
from .brackets import (
    del_phi_raw,
    function_bracket_raw,
    schouten_bracket,
    twisted_bracket_raw,
)
from .tensors import Form, MultiVector, differential, evaluate, exterior_derivative, sharp

__all__ = [
    "Residual",
    "TwistedPoissonReport",
    "TwistedPoissonStructure",
    "NotTwistedPoisson",
    "check_twisted_poisson",
    "twisted_bracket",
    "del_phi",
    "function_bracket",
    "jacobiator",
    "chain_map_residual",
    "symplectic_bivector",
    "residuals_of",
]


@dataclass
class TwistedPoissonReport:
    closed: list = field(default_factory=list)
    structure: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.closed and not self.structure

    @property
    def residuals(self) -> list[Residual]:
        return self.closed + self.structure


def check_twisted_poisson(Lam: MultiVector, phi: Form) -> TwistedPoissonReport:
    """Residuals of ``d phi`` and ``1/2 [L, L] - L#(phi)``."""
    if Lam.chart != phi.chart:
        raise ChartMismatch("bivector and 3-form live on different charts")
    if Lam.grade != 2 or phi.grade != 3:
        raise ValueError("expected a bivector and a 3-form")
    half = schouten_bracket(Lam, Lam) * Fraction(1, 2)
    return TwistedPoissonReport(
        closed=residuals_of(exterior_derivative(phi), "dphi"),
        structure=residuals_of(half - sharp(Lam, phi), "schouten-sharp"),
    )


class NotTwistedPoisson(ValueError):
    def __init__(self, report: TwistedPoissonReport):
        self.report = report
        first = report.residuals[0]
        super().__init__(f"not a twisted Poisson pair: {first.where} = {first.expr}")


class TwistedPoissonStructure:
    """A bivector ``Lambda`` and 3-form ``phi`` with ``d phi = 0`` and
    ``1/2 [L, L] = L#(phi)``.

    The pair is checked on construction; ``unchecked=True`` skips this so
    that negative controls can be built.
    """

    __slots__ = ("Lambda", "phi", "checked", "_cache")

    def __init__(self, Lambda: MultiVector, phi: Form | None = None, *, unchecked: bool = False):
        if phi is None:
            phi = Form.zero(Lambda.chart, 3)
        if not isinstance(Lambda, MultiVector) or Lambda.grade != 2:
            raise TypeError("Lambda must be a bivector")
        if not isinstance(phi, Form) or phi.grade != 3:
            raise TypeError("phi must be a 3-form")
        if Lambda.chart != phi.chart:
            raise ChartMismatch("bivector and 3-form live on different charts")
        if not unchecked:
            rep = check_twisted_poisson(Lambda, phi)
            if not rep.ok:
                raise NotTwistedPoisson(rep)
        self.Lambda = Lambda
        self.phi = phi
        self.checked = not unchecked
        self._cache = {}

    @property
    def chart(self) -> ChartSignature:
        return self.Lambda.chart

    def sharp(self, eta):
        return sharp(self.Lambda, eta)

    def bracket(self, alpha: Form, beta: Form) -> Form:
        return twisted_bracket(self, alpha, beta)

    def __repr__(self):
        return f"TwistedPoissonStructure({self.Lambda!r}, {self.phi!r})"


def twisted_bracket(S: TwistedPoissonStructure, alpha: Form, beta: Form) -> Form:
    """``{a, b}^phi = {a, b} + phi(L#a, L#b, .)``."""
    return twisted_bracket_raw(S.Lambda, S.phi, alpha, beta)


def del_phi(S: TwistedPoissonStructure, P: MultiVector) -> MultiVector:
    return del_phi_raw(S.Lambda, S.phi, P)


def function_bracket(S: TwistedPoissonStructure, f, g) -> Expr:
    return function_bracket_raw(S.Lambda, f, g)


def jacobiator(S: TwistedPoissonStructure, f, g, h) -> Expr:
    """``{f,{g,h}} + {g,{h,f}} + {h,{f,g}} - L#(phi)(df, dg, dh)``."""
    L = S.Lambda
    br = lambda a, b: function_bracket_raw(L, a, b)  # noqa: E731
    cyc = br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))
    if S.phi.is_zero():
        return cyc
    chart = L.chart
    d = [differential(x, chart) for x in (f, g, h)]
    return cyc - evaluate(sharp(L, S.phi), *d)


def chain_map_residual(S: TwistedPoissonStructure, eta: Form) -> MultiVector:
    """``del_phi(L# eta) + L#(d eta)``; vanishes for twisted Poisson pairs."""
    return del_phi(S, sharp(S.Lambda, eta)) + sharp(S.Lambda, exterior_derivative(eta))


def symplectic_bivector(omega: Form, coordinates=None) -> MultiVector:
    """The bivector ``L`` with ``i(L# a) omega = -a`` for every 1-form ``a``.

    Solved exactly: writing ``W[m][n] = omega(d_m, d_n)``, the condition on
    ``L#(dx_j)`` reads ``v W = -e_j``, so ``L^{jm} = -(W^{-1})[j][m]``.
    ``coordinates`` restricts to a factor of a product chart (for instance
    the ``M_0`` part of ``M_0 x R``); ``omega`` must not involve the others.
    """
    if not isinstance(omega, Form) or omega.grade != 2:
        raise TypeError("expected a 2-form")
    chart = omega.chart
    sub = list(range(chart.dim)) if coordinates is None else [chart.index(c) for c in coordinates]
    if any(i not in sub for idx in omega.comps for i in idx):
        raise ValueError("2-form involves coordinates outside the selected factor")
    W = [[omega[(a, b)] for b in sub] for a in sub]
    try:
        Winv = linalg.inverse(W)
    except ValueError:
        raise ValueError("2-form is degenerate") from None
    comps = {}
    for j in range(len(sub)):
        for m in range(j + 1, len(sub)):
            comps[(sub[j], sub[m])] = -Winv[j][m]
    return MultiVector(chart, 2, comps)
