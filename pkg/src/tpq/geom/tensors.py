"""Antisymmetric tensors on a coordinate chart.

Components are stored sparsely under strictly increasing index tuples
(0-based coordinate indices).  Forms evaluate with the determinant
convention, ``(dx1^dx2)(d1, d2) = 1``; multivectors likewise on 1-forms.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping

from .._alt import check_index, signed_permutations, sort_sign
from ..expr import ChartMismatch, ChartSignature, Expr, as_expr

__all__ = [
    "MultiVector",
    "Form",
    "wedge",
    "exterior_derivative",
    "differential",
    "interior_product",
    "pairing",
    "sharp",
    "evaluate",
    "MAX_DIM",
    "set_max_dim",
]

MAX_DIM = 8


def set_max_dim(n: int) -> None:
    """Raise or lower the chart dimension cap (alternating sums are exponential in grade)."""
    global MAX_DIM
    MAX_DIM = int(n)


class VarianceMismatch(TypeError):
    pass


class _Alternating:
    __slots__ = ("chart", "grade", "comps")
    variance = ""

    def __init__(self, chart: ChartSignature, grade: int, comps: Mapping | None = None, *, _trusted=False):
        if chart.dim > MAX_DIM:
            raise ValueError(f"chart dimension {chart.dim} exceeds the cap {MAX_DIM}")
        if not 0 <= grade:
            raise ValueError("grade must be non-negative")
        self.chart = chart
        self.grade = grade
        if _trusted:
            self.comps = comps
            return
        out = {}
        for idx, val in (comps or {}).items():
            idx = check_index(idx, chart.dim, grade)
            val = as_expr(val, chart)
            if val.sig is not None and val.sig != chart:
                raise ChartMismatch("component lives on a different chart")
            if not val.is_zero():
                out[idx] = val + Expr.zero(chart)
        self.comps = out

    @classmethod
    def _make(cls, chart, grade, comps):
        return cls(chart, grade, {k: v for k, v in comps.items() if not v.is_zero()}, _trusted=True)

    # constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, chart: ChartSignature, grade: int):
        return cls(chart, grade, {}, _trusted=True)

    @classmethod
    def scalar(cls, chart: ChartSignature, value):
        return cls(chart, 0, {(): value})

    @classmethod
    def basis(cls, chart: ChartSignature, *names: str):
        """``dx_a ^ dx_b ^ ...`` or ``d_a ^ d_b ^ ...`` by coordinate name."""
        sign, idx = sort_sign([chart.index(n) for n in names])
        if sign == 0:
            return cls.zero(chart, len(names))
        return cls(chart, len(names), {idx: sign})

    @classmethod
    def from_components(cls, chart: ChartSignature, grade: int, comps: Mapping):
        """Components keyed by any index order; signs are applied while sorting.

        Keys may be tuples of coordinate names or 0-based indices.
        """
        acc: dict = {}
        for key, val in comps.items():
            key = tuple(chart.index(k) if isinstance(k, str) else k for k in key)
            sign, idx = sort_sign(key)
            if sign == 0:
                continue
            acc[idx] = acc.get(idx, Expr.zero(chart)) + sign * as_expr(val, chart)
        return cls(chart, grade, acc)

    # inspection ------------------------------------------------------------

    def __getitem__(self, key) -> Expr:
        if not isinstance(key, tuple):
            key = (key,)
        key = tuple(self.chart.index(k) if isinstance(k, str) else k for k in key)
        sign, idx = sort_sign(key)
        if sign == 0:
            return Expr.zero(self.chart)
        v = self.comps.get(idx)
        if v is None:
            return Expr.zero(self.chart)
        return v if sign > 0 else -v

    def items(self):
        return sorted(self.comps.items())

    def is_zero(self) -> bool:
        return not self.comps

    def scalar_value(self) -> Expr:
        if self.grade != 0:
            raise ValueError("not a grade-0 element")
        return self.comps.get((), Expr.zero(self.chart))

    def _compat(self, other):
        if not isinstance(other, _Alternating):
            raise TypeError("expected a multivector or form")
        if type(other) is not type(self):
            raise VarianceMismatch(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.chart != self.chart:
            raise ChartMismatch("operands live on different charts")

    def __eq__(self, other):
        if not isinstance(other, _Alternating):
            return NotImplemented
        return (
            type(self) is type(other)
            and self.chart == other.chart
            and self.grade == other.grade
            and self.comps == other.comps
        )

    __hash__ = None

    # linear structure ------------------------------------------------------

    def __add__(self, other):
        self._compat(other)
        if other.grade != self.grade and not (other.is_zero() or self.is_zero()):
            raise ValueError("cannot add elements of different grades")
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        d = dict(self.comps)
        for k, v in other.comps.items():
            d[k] = d[k] + v if k in d else v
        return type(self)._make(self.chart, self.grade, d)

    def __neg__(self):
        return type(self)(self.chart, self.grade, {k: -v for k, v in self.comps.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, _Alternating):
            return NotImplemented
        s = as_expr(scalar, self.chart)
        return type(self)._make(self.chart, self.grade, {k: v * s for k, v in self.comps.items()})

    __rmul__ = __mul__

    def map(self, fn):
        """Apply ``fn`` to every component."""
        return type(self)._make(self.chart, self.grade, {k: fn(v) for k, v in self.comps.items()})

    def wedge(self, other):
        return wedge(self, other)

    def conjugate(self):
        """Componentwise conjugation in real coordinates.

        On charts with conjugate coordinate pairs the basis itself is
        permuted, so the result is re-indexed through the involution.
        """
        chart = self.chart
        acc = {}
        for idx, v in self.comps.items():
            sign, new = sort_sign([chart.conj_index(i) for i in idx])
            acc[new] = acc.get(new, Expr.zero(chart)) + sign * v.conjugate()
        return type(self)._make(chart, self.grade, acc)

    def __repr__(self):
        names = self.chart.coordinates
        sym = "d" if self.variance == "contra" else "dx"
        if not self.comps:
            return f"{type(self).__name__}(grade={self.grade}, 0)"
        parts = []
        for idx, v in self.items():
            basis = "^".join(f"{sym}[{names[i]}]" for i in idx) or "1"
            parts.append(f"({v})*{basis}")
        return f"{type(self).__name__}(grade={self.grade}, " + " + ".join(parts) + ")"

    def to_strings(self) -> dict[str, str]:
        """``{"1,2": "expr", ...}`` with 1-based indices."""
        return {",".join(str(i + 1) for i in idx): str(v) for idx, v in self.items()}


class MultiVector(_Alternating):
    """Contravariant antisymmetric tensor (grade-k multivector field)."""

    __slots__ = ()
    variance = "contra"


class Form(_Alternating):
    """Differential form."""

    __slots__ = ()
    variance = "co"


# ---------------------------------------------------------------------------


def wedge(a: _Alternating, b: _Alternating) -> _Alternating:
    a._compat(b)
    acc: dict = {}
    for I, x in a.comps.items():
        for J, y in b.comps.items():
            sign, K = sort_sign(I + J)
            if sign == 0:
                continue
            term = x * y if sign > 0 else -(x * y)
            acc[K] = acc[K] + term if K in acc else term
    return type(a)._make(a.chart, a.grade + b.grade, acc)


def exterior_derivative(eta: Form) -> Form:
    if not isinstance(eta, Form):
        raise TypeError("exterior derivative acts on forms")
    chart = eta.chart
    acc: dict = {}
    for I, v in eta.comps.items():
        for m in range(chart.dim):
            if m in I:
                continue
            dv = v.diff(m)
            if dv.is_zero():
                continue
            sign, K = sort_sign((m,) + I)
            term = dv if sign > 0 else -dv
            acc[K] = acc[K] + term if K in acc else term
    return Form._make(chart, eta.grade + 1, acc)


def differential(f, chart: ChartSignature) -> Form:
    """``df`` of a scalar expression."""
    return exterior_derivative(Form.scalar(chart, f))


def interior_product(X: MultiVector, eta: Form) -> Form:
    """``i_X eta`` with ``X`` in the first slot."""
    if not isinstance(X, MultiVector) or X.grade != 1:
        raise TypeError("interior product needs a vector field")
    if not isinstance(eta, Form):
        raise TypeError("interior product acts on forms")
    if X.chart != eta.chart:
        raise ChartMismatch("operands live on different charts")
    if eta.grade == 0:
        return Form.zero(eta.chart, 0)
    acc: dict = {}
    for I, v in eta.comps.items():
        for p, m in enumerate(I):
            xm = X.comps.get((m,))
            if xm is None:
                continue
            J = I[:p] + I[p + 1:]
            term = xm * v
            if p % 2:
                term = -term
            acc[J] = acc[J] + term if J in acc else term
    return Form._make(eta.chart, eta.grade - 1, acc)


def pairing(alpha: Form, X: MultiVector) -> Expr:
    """``<alpha, X>`` for a 1-form and a vector field."""
    if alpha.chart != X.chart:
        raise ChartMismatch("operands live on different charts")
    out = Expr.zero(alpha.chart)
    for (m,), a in alpha.comps.items():
        x = X.comps.get((m,))
        if x is not None:
            out = out + a * x
    return out


def _det_eval(coeffs: Mapping, vectors: list) -> Expr:
    """``sum_I c_I det[v_a^{I_b}]`` for sparse component dicts ``vectors``."""
    k = len(vectors)
    out = None
    for I, c in coeffs.items():
        for sign, p in signed_permutations(k):
            prod = c
            for a in range(k):
                comp = vectors[a].get(I[p[a]])
                if comp is None:
                    prod = None
                    break
                prod = prod * comp
            if prod is None:
                continue
            if sign < 0:
                prod = -prod
            out = prod if out is None else out + prod
    return out


def evaluate(T: _Alternating, *args: _Alternating) -> Expr:
    """Evaluate a form on vector fields or a multivector on 1-forms."""
    if len(args) != T.grade:
        raise ValueError(f"expected {T.grade} arguments, got {len(args)}")
    want = Form if isinstance(T, MultiVector) else MultiVector
    vecs = []
    for a in args:
        if not isinstance(a, want) or a.grade != 1:
            raise TypeError(f"arguments must be grade-1 {want.__name__}s")
        if a.chart != T.chart:
            raise ChartMismatch("operands live on different charts")
        vecs.append({i: v for (i,), v in a.comps.items()})
    if T.grade == 0:
        return T.scalar_value()
    out = _det_eval(T.comps, vecs)
    return Expr.zero(T.chart) if out is None else out


def sharp(L: MultiVector, eta) -> _Alternating:
    """Extension of the anchor ``L^#`` to forms of any degree.

    Degree 1: ``<beta, L^# alpha> = L(alpha, beta)``; degree k:
    ``L^#(eta)(a_1..a_k) = (-1)^k eta(L^# a_1, ..., L^# a_k)``; scalars map to
    themselves.
    """
    if not isinstance(L, MultiVector) or L.grade != 2:
        raise TypeError("sharp needs a bivector")
    if isinstance(eta, Expr) or not isinstance(eta, _Alternating):
        return MultiVector.scalar(L.chart, eta)
    if not isinstance(eta, Form):
        raise TypeError("sharp acts on forms")
    if eta.chart != L.chart:
        raise ChartMismatch("operands live on different charts")
    k = eta.grade
    chart = L.chart
    if k == 0:
        return MultiVector._make(chart, 0, dict(eta.comps))
    rows = anchor_rows(L)
    if k == 1:
        acc: dict = {}
        for (j,), a in eta.comps.items():
            for m, lam in rows[j].items():
                term = a * lam
                acc[(m,)] = acc[(m,)] + term if (m,) in acc else term
        return MultiVector._make(chart, 1, acc)
    # only index sets reachable through the anchor can be nonzero
    support = sorted({j for j in range(chart.dim) if rows[j]})
    acc = {}
    for J in combinations(support, k):
        val = _det_eval(eta.comps, [rows[j] for j in J])
        if val is not None and not val.is_zero():
            acc[J] = val if k % 2 == 0 else -val
    return MultiVector._make(chart, k, acc)


def anchor_rows(L: MultiVector) -> list[dict]:
    """``rows[j] = components of L^#(dx_j)``, i.e. ``{m: L^{jm}}``."""
    rows = [dict() for _ in range(L.chart.dim)]
    for (a, b), v in L.comps.items():
        rows[a][b] = v
        rows[b][a] = -v
    return rows
