"""Chevalley-Eilenberg calculus on a finite-dimensional Lie algebra.

Elements of the exterior algebras of ``g`` and ``g*`` carry exact
coefficients: ``Fraction`` for numeric work, or :class:`~tpq.expr.Expr` when
unknowns (such as the components of a vector ``Z``) are kept symbolic.
Everything here is the left-invariant reading of the chart calculus in
:mod:`tpq.geom`: anchor terms act on constants and drop out.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

from . import linalg
from ._alt import check_index, sort_sign

__all__ = [
    "LieAlgebraError",
    "LieAlgebraModel",
    "AlgMultiVector",
    "AlgForm",
    "build_gl_subalgebra",
    "build_matrix_subalgebra",
    "ce_differential",
    "algebraic_schouten",
    "alg_sharp",
    "check_twisted_structure",
    "closed_two_forms",
    "algebraic_twisted_bracket",
    "algebraic_del_phi",
    "solve_prequantization",
    "ltp_cohomology",
    "span_contains",
]

_ZERO = Fraction(0)


class LieAlgebraError(ValueError):
    pass


def _nz(v) -> bool:
    return not (v == 0)


class LieAlgebraModel:
    """Structure constants ``[e_i, e_j] = sum_k c[i,j][k] e_k``.

    Antisymmetry and the Jacobi identity are verified on construction.
    """

    def __init__(self, names: Sequence[str], brackets: Mapping):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise LieAlgebraError("duplicate basis name")
        self.dim = len(self.names)
        self._index = {n: i for i, n in enumerate(self.names)}
        table: dict = {}
        for (i, j), out in brackets.items():
            i, j = self._idx(i), self._idx(j)
            vec = {self._idx(k): Fraction(v) for k, v in dict(out).items() if v != 0}
            if i == j:
                if vec:
                    raise LieAlgebraError(f"[{self.names[i]}, {self.names[i]}] must vanish")
                continue
            key, sgn = ((i, j), 1) if i < j else ((j, i), -1)
            vec = {k: sgn * v for k, v in vec.items()}
            if key in table and table[key] != vec:
                raise LieAlgebraError(
                    f"structure constants for ({self.names[key[0]]}, {self.names[key[1]]}) are not antisymmetric"
                )
            if vec:
                table[key] = vec
        self._table = table
        self._check_jacobi()

    def _idx(self, k) -> int:
        if isinstance(k, str):
            try:
                return self._index[k]
            except KeyError:
                raise LieAlgebraError(f"unknown basis element {k!r}") from None
        if not 0 <= k < self.dim:
            raise LieAlgebraError(f"basis index {k} out of range")
        return k

    def index(self, name: str) -> int:
        return self._idx(name)

    def bracket_basis(self, i: int, j: int) -> dict:
        """``[e_i, e_j]`` as a sparse ``{k: c}`` dictionary."""
        if i == j:
            return {}
        if i < j:
            return self._table.get((i, j), {})
        return {k: -v for k, v in self._table.get((j, i), {}).items()}

    def structure_constant(self, i, j, k) -> Fraction:
        return self.bracket_basis(self._idx(i), self._idx(j)).get(self._idx(k), _ZERO)

    def _check_jacobi(self):
        n = self.dim
        for a, b, c in combinations(range(n), 3):
            tot: dict = {}
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                for m, v in self.bracket_basis(y, z).items():
                    for l, w in self.bracket_basis(x, m).items():
                        tot[l] = tot.get(l, _ZERO) + v * w
            if any(v != 0 for v in tot.values()):
                raise LieAlgebraError(
                    f"Jacobi identity fails on ({self.names[a]}, {self.names[b]}, {self.names[c]})"
                )

    def is_abelian(self) -> bool:
        return not self._table

    def __repr__(self):
        return f"LieAlgebraModel({list(self.names)})"


def build_matrix_subalgebra(entries: Iterable[tuple[int, int]]) -> LieAlgebraModel:
    """Span of elementary matrices ``e_ab`` for the given 1-based positions.

    Uses ``[e_ab, e_cd] = delta_bc e_ad - delta_da e_cb`` and rejects spans
    that are not closed under the commutator.
    """
    entries = list(dict.fromkeys((int(a), int(b)) for a, b in entries))
    if not entries:
        raise LieAlgebraError("empty span")
    pos = {e: k for k, e in enumerate(entries)}
    names = [f"e{a}{b}" if a < 10 and b < 10 else f"e{a}_{b}" for a, b in entries]
    br: dict = {}
    for (a, b), (c, d) in combinations(entries, 2):
        out: dict = {}
        if b == c:
            out[(a, d)] = out.get((a, d), 0) + 1
        if d == a:
            out[(c, b)] = out.get((c, b), 0) - 1
        out = {k: v for k, v in out.items() if v}
        for k in out:
            if k not in pos:
                raise LieAlgebraError(
                    f"span is not closed: [e{a}{b}, e{c}{d}] leaves it (needs e{k[0]}{k[1]})"
                )
        br[(pos[(a, b)], pos[(c, d)])] = {pos[k]: v for k, v in out.items()}
    return LieAlgebraModel(names, br)


def build_gl_subalgebra(rows: Iterable[int], cols: Iterable[int]) -> LieAlgebraModel:
    """Span of ``e_ij`` for ``i`` in ``rows`` and ``j`` in ``cols`` (1-based),
    basis ordered row by row."""
    rows, cols = sorted(set(rows)), sorted(set(cols))
    return build_matrix_subalgebra((i, j) for i in rows for j in cols)


# ---------------------------------------------------------------------------


class _AlgElement:
    __slots__ = ("algebra", "grade", "comps")
    kind = ""

    def __init__(self, algebra: LieAlgebraModel, grade: int, comps: Mapping | None = None):
        self.algebra = algebra
        self.grade = grade
        out = {}
        for idx, v in (comps or {}).items():
            idx = tuple(algebra._idx(k) for k in idx)
            s, key = sort_sign(idx)
            if len(idx) != grade:
                raise ValueError(f"index tuple {idx} does not have length {grade}")
            if s == 0:
                continue
            v = Fraction(v) if isinstance(v, int) else v
            out[key] = out[key] + s * v if key in out else s * v
        self.comps = {k: v for k, v in out.items() if _nz(v)}

    @classmethod
    def _make(cls, algebra, grade, comps):
        obj = cls.__new__(cls)
        obj.algebra, obj.grade = algebra, grade
        obj.comps = {k: v for k, v in comps.items() if _nz(v)}
        return obj

    @classmethod
    def zero(cls, algebra, grade):
        return cls._make(algebra, grade, {})

    @classmethod
    def basis(cls, algebra, *names):
        return cls(algebra, len(names), {tuple(names): 1})

    @classmethod
    def from_vector(cls, algebra, grade, vec):
        keys = list(combinations(range(algebra.dim), grade))
        return cls._make(algebra, grade, dict(zip(keys, vec)))

    def vector(self) -> list:
        return [self.comps.get(k, _ZERO) for k in combinations(range(self.algebra.dim), self.grade)]

    def __getitem__(self, key):
        if not isinstance(key, tuple):
            key = (key,)
        s, idx = sort_sign(self.algebra._idx(k) for k in key)
        if s == 0:
            return _ZERO
        v = self.comps.get(idx, _ZERO)
        return v if s > 0 else -v

    def is_zero(self) -> bool:
        return not self.comps

    def _compat(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.algebra is not self.algebra:
            raise ValueError("elements of different Lie algebras")

    def __add__(self, other):
        self._compat(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if other.grade != self.grade:
            raise ValueError("cannot add elements of different grades")
        d = dict(self.comps)
        for k, v in other.comps.items():
            d[k] = d[k] + v if k in d else v
        return type(self)._make(self.algebra, self.grade, d)

    def __neg__(self):
        return type(self)._make(self.algebra, self.grade, {k: -v for k, v in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        if isinstance(s, _AlgElement):
            return NotImplemented
        s = Fraction(s) if isinstance(s, int) else s
        return type(self)._make(self.algebra, self.grade, {k: v * s for k, v in self.comps.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, _AlgElement):
            return NotImplemented
        if type(self) is not type(other) or self.algebra is not other.algebra:
            return False
        if self.grade != other.grade and not (self.is_zero() and other.is_zero()):
            return False
        return (self - other).is_zero()

    __hash__ = None

    def wedge(self, other):
        self._compat(other)
        acc: dict = {}
        for I, a in self.comps.items():
            for J, b in other.comps.items():
                s, K = sort_sign(I + J)
                if s == 0:
                    continue
                t = a * b if s > 0 else -(a * b)
                acc[K] = acc[K] + t if K in acc else t
        return type(self)._make(self.algebra, self.grade + other.grade, acc)

    def map(self, fn):
        return type(self)._make(self.algebra, self.grade, {k: fn(v) for k, v in self.comps.items()})

    def items(self):
        return sorted(self.comps.items())

    def label(self, idx) -> str:
        star = "*" if self.kind == "form" else ""
        return "^".join(self.algebra.names[i] + star for i in idx) or "1"

    def to_strings(self) -> dict:
        return {self.label(k): str(v) for k, v in self.items()}

    def __repr__(self):
        if not self.comps:
            return f"{type(self).__name__}(grade={self.grade}, 0)"
        body = " + ".join(f"({v})*{self.label(k)}" for k, v in self.items())
        return f"{type(self).__name__}(grade={self.grade}, {body})"


class AlgMultiVector(_AlgElement):
    """Element of the exterior algebra of ``g``."""

    __slots__ = ()
    kind = "vector"


class AlgForm(_AlgElement):
    """Element of the exterior algebra of ``g*``."""

    __slots__ = ()
    kind = "form"


def _evaluate(coeffs: Mapping, vecs: list):
    """``sum_I c_I det[v_a(I_b)]``; ``vecs`` are sparse ``{index: value}``."""
    from ._alt import signed_permutations

    k = len(vecs)
    out = _ZERO
    for I, c in coeffs.items():
        for sign, p in signed_permutations(k):
            prod = c
            for a in range(k):
                comp = vecs[a].get(I[p[a]])
                if comp is None:
                    prod = None
                    break
                prod = prod * comp
            if prod is not None:
                out = out + prod if sign > 0 else out - prod
    return out


def _one_vecs(x: _AlgElement) -> dict:
    if x.grade != 1:
        raise ValueError("expected a grade-1 element")
    return {i: v for (i,), v in x.comps.items()}


def evaluate(T: _AlgElement, *args: _AlgElement):
    """Evaluate a form on vectors or a multivector on covectors."""
    if len(args) != T.grade:
        raise ValueError(f"expected {T.grade} arguments")
    if T.grade == 0:
        return T.comps.get((), _ZERO)
    return _evaluate(T.comps, [_one_vecs(a) for a in args])


# ---------------------------------------------------------------------------


def ce_differential(xi: AlgForm) -> AlgForm:
    """``d xi (x_0..x_k) = sum_{i<j} (-1)^(i+j) xi([x_i, x_j], x_0..^i..^j..x_k)``."""
    if not isinstance(xi, AlgForm):
        raise TypeError("CE differential acts on forms")
    L = xi.algebra
    k = xi.grade
    acc: dict = {}
    if k == 0:
        return AlgForm.zero(L, 1)
    for J in combinations(range(L.dim), k + 1):
        val = _ZERO
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                rest = J[:i] + J[i + 1:j] + J[j + 1:]
                for m, c in L.bracket_basis(J[i], J[j]).items():
                    s, K = sort_sign((m,) + rest)
                    if s == 0:
                        continue
                    v = xi.comps.get(K)
                    if v is None:
                        continue
                    t = c * v
                    val = val + t if s * (-1) ** (i + j) > 0 else val - t
        if _nz(val):
            acc[J] = val
    return AlgForm._make(L, k + 1, acc)


def _bracket_vectors(L, i, j) -> dict:
    return L.bracket_basis(i, j)


def algebraic_schouten(P: AlgMultiVector, Q: AlgMultiVector) -> AlgMultiVector:
    """Gerstenhaber extension of the Lie bracket to the exterior algebra.

    On decomposable elements

        [x_1^..^x_p, y_1^..^y_q] = sum (-1)^(i+j) [x_i, y_j] ^ x_1..^i..x_p ^ y_1..^j..y_q

    (1-based ``i, j``), the same convention as the chart Schouten bracket.
    Scalars are central.
    """
    if not isinstance(P, AlgMultiVector) or not isinstance(Q, AlgMultiVector):
        raise TypeError("algebraic Schouten bracket acts on multivectors")
    P._compat(Q)
    L = P.algebra
    p, q = P.grade, Q.grade
    if p == 0 or q == 0:
        return AlgMultiVector.zero(L, max(p + q - 1, 0))
    acc: dict = {}
    for I, a in P.comps.items():
        for J, b in Q.comps.items():
            ab = a * b
            for i in range(p):
                Irest = I[:i] + I[i + 1:]
                for j in range(q):
                    Jrest = J[:j] + J[j + 1:]
                    for m, c in L.bracket_basis(I[i], J[j]).items():
                        s, K = sort_sign((m,) + Irest + Jrest)
                        if s == 0:
                            continue
                        t = c * ab
                        if s * (-1) ** (i + j) < 0:
                            t = -t
                        acc[K] = acc[K] + t if K in acc else t
    return AlgMultiVector._make(L, p + q - 1, acc)


def _anchor_rows(r: AlgMultiVector) -> list[dict]:
    rows = [dict() for _ in range(r.algebra.dim)]
    for (a, b), v in r.comps.items():
        rows[a][b] = v
        rows[b][a] = -v
    return rows


def alg_sharp(r: AlgMultiVector, eta: AlgForm) -> AlgMultiVector:
    """``r#`` extended to forms: ``<b, r# a> = r(a, b)`` in degree 1 and
    ``r#(eta)(a_1..a_k) = (-1)^k eta(r# a_1, .., r# a_k)`` in degree k."""
    if r.grade != 2:
        raise ValueError("r must be a bivector")
    L = r.algebra
    k = eta.grade
    if k == 0:
        return AlgMultiVector._make(L, 0, dict(eta.comps))
    rows = _anchor_rows(r)
    acc: dict = {}
    support = [j for j in range(L.dim) if rows[j]]
    for J in combinations(support, k):
        val = _evaluate(eta.comps, [rows[j] for j in J])
        if _nz(val):
            acc[J] = val if k % 2 == 0 else -val
    return AlgMultiVector._make(L, k, acc)


@dataclass
class AlgebraicReport:
    closed: list = field(default_factory=list)
    structure: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.closed and not self.structure

    @property
    def residuals(self) -> list:
        return self.closed + self.structure


def _residuals(T: _AlgElement, label: str) -> list:
    return [(f"{label}[{T.label(k)}]", v) for k, v in T.items()]


def check_twisted_structure(r: AlgMultiVector, phi: AlgForm) -> AlgebraicReport:
    """Residuals of ``d phi`` and ``1/2 [r, r] - r#(phi)``."""
    half = algebraic_schouten(r, r) * Fraction(1, 2)
    return AlgebraicReport(
        closed=_residuals(ce_differential(phi), "dphi"),
        structure=_residuals(half - alg_sharp(r, phi), "schouten-sharp"),
    )


def _differential_matrix(L: LieAlgebraModel, k: int) -> list[list]:
    """Matrix of ``d`` from k-forms to (k+1)-forms in the sorted bases."""
    src = list(combinations(range(L.dim), k))
    dst = list(combinations(range(L.dim), k + 1))
    cols = [ce_differential(AlgForm._make(L, k, {I: Fraction(1)})) for I in src]
    return [[c.comps.get(J, _ZERO) for c in cols] for J in dst]


def closed_two_forms(L: LieAlgebraModel) -> list[AlgForm]:
    """Basis of the closed 2-forms (exact nullspace of ``d`` on degree 2)."""
    M = _differential_matrix(L, 2)
    ncols = comb(L.dim, 2)
    basis = linalg.nullspace(M, ncols) if M else linalg.nullspace([], ncols)
    return [AlgForm.from_vector(L, 2, v) for v in basis]


def span_contains(basis: list[_AlgElement], x: _AlgElement) -> bool:
    """Exact test of ``x in span(basis)``."""
    if x.is_zero():
        return True
    if not basis:
        return False
    rows = [list(col) for col in zip(*[b.vector() for b in basis])]
    return linalg.solve(rows, x.vector()).solvable


def algebraic_twisted_bracket(r: AlgMultiVector, phi: AlgForm, alpha: AlgForm, beta: AlgForm) -> AlgForm:
    """``{a, b}^phi(y) = d b(r# a, y) - d a(r# b, y) + phi(r# a, r# b, y)``.

    This is the Koszul bracket of left-invariant forms (the exact term
    ``d r(a, b)`` is the differential of a constant) plus the twist.
    """
    L = r.algebra
    ra, rb = alg_sharp(r, alpha), alg_sharp(r, beta)
    va, vb = _one_vecs(ra), _one_vecs(rb)
    da, db = ce_differential(alpha), ce_differential(beta)
    acc: dict = {}
    for y in range(L.dim):
        e = {y: Fraction(1)}
        val = _evaluate(db.comps, [va, e]) - _evaluate(da.comps, [vb, e])
        if not phi.is_zero():
            val = val + _evaluate(phi.comps, [va, vb, e])
        if _nz(val):
            acc[(y,)] = val
    return AlgForm._make(L, 1, acc)


def algebraic_del_phi(r: AlgMultiVector, phi: AlgForm, P: AlgMultiVector) -> AlgMultiVector:
    """``(dP)(a_0..a_k) = sum_{i<j} (-1)^(i+j) P({a_i, a_j}^phi, ..^i..^j..)``.

    The anchor terms of the chart formula differentiate constants and are
    dropped.
    """
    L = r.algebra
    k = P.grade
    if k == 0:
        return AlgMultiVector.zero(L, 1)
    cob = [AlgForm._make(L, 1, {(i,): Fraction(1)}) for i in range(L.dim)]
    cache: dict = {}

    def br(i, j):
        if (i, j) not in cache:
            cache[(i, j)] = algebraic_twisted_bracket(r, phi, cob[i], cob[j])
        return cache[(i, j)]

    acc: dict = {}
    for J in combinations(range(L.dim), k + 1):
        val = _ZERO
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                rest = J[:i] + J[i + 1:j] + J[j + 1:]
                for (m,), g in br(J[i], J[j]).comps.items():
                    s, K = sort_sign((m,) + rest)
                    if s == 0:
                        continue
                    v = P.comps.get(K)
                    if v is None:
                        continue
                    t = g * v
                    val = val + t if s * (-1) ** (i + j) > 0 else val - t
        if _nz(val):
            acc[J] = val
    return AlgMultiVector._make(L, k + 1, acc)


def _del_phi_matrix(r, phi, k) -> list[list]:
    L = r.algebra
    src = list(combinations(range(L.dim), k))
    dst = list(combinations(range(L.dim), k + 1))
    cols = [algebraic_del_phi(r, phi, AlgMultiVector._make(L, k, {I: Fraction(1)})) for I in src]
    return [[c.comps.get(J, _ZERO) for c in cols] for J in dst]


@dataclass
class PrequantizationResult:
    solvable: bool
    Z: AlgMultiVector | None = None
    Phi: AlgForm | None = None
    certificate: AlgForm | None = None
    assumptions: list = field(default_factory=list)

    def certificate_valid(self, r, phi) -> bool:
        """Re-check that the certificate annihilates every ``d_phi Z - r#(Phi)``
        and pairs nontrivially with ``r``."""
        if self.certificate is None:
            return False
        L = r.algebra
        y = self.certificate.vector()
        cols = _feasible_columns(r, phi)
        for c in cols:
            if sum((a * b for a, b in zip(y, c)), _ZERO) != 0:
                return False
        return sum((a * b for a, b in zip(y, r.vector())), _ZERO) != 0


def _feasible_columns(r, phi) -> list[list]:
    L = r.algebra
    cols = []
    for a in range(L.dim):
        cols.append(algebraic_del_phi(r, phi, AlgMultiVector._make(L, 1, {(a,): Fraction(1)})).vector())
    for Phi in closed_two_forms(L):
        cols.append((-alg_sharp(r, Phi)).vector())
    return cols


def solve_prequantization(r: AlgMultiVector, phi: AlgForm) -> PrequantizationResult:
    """Decide whether ``r + d_phi Z = r#(Phi)`` has a solution with ``Z`` in
    ``g`` and ``Phi`` a closed 2-form.

    The system is linear in the components of ``Z`` and the coordinates of
    ``Phi`` on a basis of closed 2-forms.  Solutions with ``Phi = 0`` are
    preferred.  When none exists the certificate is a 2-form ``y`` (a
    functional on bivectors) vanishing on every ``d_phi Z - r#(Phi)`` while
    ``y(r) != 0``.  Integrality of ``[Phi]`` is never decided.
    """
    L = r.algebra
    closed = closed_two_forms(L)
    n = L.dim
    target = (-r).vector()
    cols = _feasible_columns(r, phi)
    assumptions = ["integrality: assumed"]
    for use in (n, len(cols)):
        rows = [list(row) for row in zip(*cols[:use])] if use else [[] for _ in target]
        if use == 0:
            if all(v == 0 for v in target):
                return PrequantizationResult(True, AlgMultiVector.zero(L, 1), AlgForm.zero(L, 2), assumptions=assumptions)
            continue
        sol = linalg.solve(rows, target)
        if sol.solvable:
            x = sol.x + [_ZERO] * (len(cols) - use)
            Z = AlgMultiVector.from_vector(L, 1, x[:n])
            Phi = AlgForm.zero(L, 2)
            for c, b in zip(x[n:], closed):
                Phi = Phi + b * c
            return PrequantizationResult(True, Z, Phi, assumptions=assumptions)
    rows = [list(row) for row in zip(*cols)]
    y = linalg.left_null_certificate(rows, target)
    cert = AlgForm.from_vector(L, 2, y) if y is not None else None
    return PrequantizationResult(False, certificate=cert, assumptions=assumptions)


def ltp_cohomology(r: AlgMultiVector, phi: AlgForm, k: int) -> int:
    """``dim ker(d_phi on degree k) - rank(d_phi on degree k-1)``."""
    L = r.algebra
    n = L.dim
    if not 0 <= k <= n:
        return 0
    dim_k = comb(n, k)
    rank_out = linalg.rank(_del_phi_matrix(r, phi, k)) if k < n else 0
    rank_in = linalg.rank(_del_phi_matrix(r, phi, k - 1)) if k >= 1 else 0
    return dim_k - rank_out - rank_in


def del_phi_matrix(r: AlgMultiVector, phi: AlgForm, k: int) -> list[list]:
    """Dense matrix of ``d_phi`` from degree k to k+1 (sorted bases)."""
    return _del_phi_matrix(r, phi, k)


def ce_matrix(L: LieAlgebraModel, k: int) -> list[list]:
    """Dense matrix of the CE differential from degree k to k+1."""
    return _differential_matrix(L, k)
