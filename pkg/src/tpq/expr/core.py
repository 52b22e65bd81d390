"""Exact symbolic scalars over a coordinate chart.

An :class:`Expr` is a finite sum of terms ``c * m`` where ``c`` is a Gaussian
rational and ``m`` a monomial in atoms:

* the transcendental constant ``pi``,
* coordinates,
* jets ``D[f, x_i, x_j, ...]`` of opaque smooth functions (free differential
  indeterminates; the index multiset is kept sorted),
* at most one exponential ``exp(L)`` with ``L`` a rational-linear combination
  of coordinates and underived opaque symbols.

Atoms carry integer exponents of either sign, so division by a single term is
always possible.  The term dictionary is canonical, which makes equality and
the zero test structural.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Union

__all__ = [
    "ChartSignature",
    "OpaqueSymbol",
    "Expr",
    "GaussianRational",
    "Term",
    "ExprError",
    "ChartMismatch",
    "is_zero",
    "differentiate",
    "conjugate",
    "as_expr",
    "PI_ATOM",
]


class ExprError(ValueError):
    pass


class ChartMismatch(ExprError):
    pass


# ---------------------------------------------------------------------------
# Gaussian rational coefficients, stored internally as (re, im) tuples of
# ints/Fractions.  Fractions with denominator 1 are folded back to int.


def _q(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _cadd(a, b):
    return (_q(a[0] + b[0]), _q(a[1] + b[1]))


def _cmul(a, b):
    ar, ai = a
    br, bi = b
    if ai == 0 and bi == 0:
        return (_q(ar * br), 0)
    return (_q(ar * br - ai * bi), _q(ar * bi + ai * br))


def _cneg(a):
    return (-a[0], -a[1])


def _cinv(a):
    ar, ai = a
    n = Fraction(ar) * ar + Fraction(ai) * ai
    if n == 0:
        raise ZeroDivisionError("division by zero")
    return (_q(Fraction(ar) / n), _q(Fraction(-ai) / n))


def _cnz(a):
    return a[0] != 0 or a[1] != 0


_ONE = (1, 0)
_ZERO = (0, 0)


@dataclass(frozen=True)
class GaussianRational:
    """``re + im*i`` with exact rational parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    @classmethod
    def _from(cls, c) -> "GaussianRational":
        return cls(Fraction(c[0]), Fraction(c[1]))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __str__(self) -> str:
        return _coeff_str((_q(self.re), _q(self.im)))


# ---------------------------------------------------------------------------
# Atoms.  Plain tuples so that sorting is cheap and deterministic:
#   (0, "pi")                       the constant pi
#   (1, index, name)                coordinate number `index`
#   (2, name, (i1, i2, ...))        jet of opaque symbol `name`, sorted indices
# Exponentials live outside the factor tuple as a normalized argument
#   ((atom, Fraction), ...)         atom is a coordinate or an underived jet

PI_ATOM = (0, "pi")

# Monomial: (factors, exparg), factors = ((atom, nonzero int), ...) sorted.
_UNIT = ((), ())


def _merge_lin(a, b, scale=1):
    """Sum of two normalized linear combinations (sorted (atom, coef) tuples)."""
    if not b:
        return a
    d = dict(a)
    for atom, c in b:
        v = d.get(atom, 0) + scale * c
        if v == 0:
            d.pop(atom, None)
        else:
            d[atom] = v
    return tuple(sorted(d.items()))


def _mono_mul(m1, m2):
    f1, e1 = m1
    f2, e2 = m2
    if not f2:
        fac = f1
    elif not f1:
        fac = f2
    else:
        d = dict(f1)
        for atom, k in f2:
            v = d.get(atom, 0) + k
            if v == 0:
                del d[atom]
            else:
                d[atom] = v
        fac = tuple(sorted(d.items()))
    if not e2:
        ex = e1
    elif not e1:
        ex = e2
    else:
        ex = _merge_lin(e1, e2)
    return (fac, ex)


def _mono_inv(m):
    fac, ex = m
    return (tuple((a, -k) for a, k in fac), tuple((a, -c) for a, c in ex))


# ---------------------------------------------------------------------------
# Chart signature


@dataclass(frozen=True)
class OpaqueSymbol:
    """A smooth function known only by name and the coordinates it depends on.

    An empty dependency set declares a constant symbol.
    """

    name: str
    depends: tuple[str, ...] = ()
    real: bool = True


_RESERVED = {"i", "pi", "exp", "D"}


@dataclass(frozen=True)
class ChartSignature:
    """Coordinates, their conjugation involution and declared opaque symbols."""

    coordinates: tuple[str, ...]
    conjugation: tuple[tuple[str, str], ...] = ()
    opaque: tuple[OpaqueSymbol, ...] = ()
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _conj: tuple = field(init=False, repr=False, compare=False, hash=False)
    _opaque: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        coords = tuple(self.coordinates)
        object.__setattr__(self, "coordinates", coords)
        object.__setattr__(self, "conjugation", tuple(tuple(p) for p in self.conjugation))
        object.__setattr__(self, "opaque", tuple(self.opaque))
        if len(set(coords)) != len(coords):
            raise ExprError("duplicate coordinate name")
        index = {name: k for k, name in enumerate(coords)}
        for name in coords:
            _check_ident(name)
        conj = list(range(len(coords)))
        for a, b in self.conjugation:
            if a not in index or b not in index:
                raise ExprError(f"conjugation pair ({a}, {b}) names an undeclared coordinate")
            if a == b:
                continue
            ia, ib = index[a], index[b]
            if conj[ia] != ia or conj[ib] != ib:
                raise ExprError(f"coordinate appears in two conjugation pairs: ({a}, {b})")
            conj[ia], conj[ib] = ib, ia
        opaque = {}
        for sym in self.opaque:
            _check_ident(sym.name)
            if sym.name in index or sym.name in opaque:
                raise ExprError(f"duplicate identifier {sym.name!r}")
            for dep in sym.depends:
                if dep not in index:
                    raise ExprError(f"opaque symbol {sym.name!r} depends on undeclared coordinate {dep!r}")
            if sym.real:
                deps = {index[d] for d in sym.depends}
                if {conj[d] for d in deps} != deps:
                    raise ExprError(f"real symbol {sym.name!r} must depend on conjugate coordinates in pairs")
            opaque[sym.name] = sym
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_conj", tuple(conj))
        object.__setattr__(self, "_opaque", opaque)

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ExprError(f"unknown coordinate {name!r}") from None

    def has_coordinate(self, name: str) -> bool:
        return name in self._index

    def symbol(self, name: str) -> OpaqueSymbol:
        try:
            return self._opaque[name]
        except KeyError:
            raise ExprError(f"undeclared identifier {name!r}") from None

    def has_symbol(self, name: str) -> bool:
        return name in self._opaque

    def conj_index(self, k: int) -> int:
        return self._conj[k]

    def is_real_coordinate(self, k: int) -> bool:
        return self._conj[k] == k

    # handy constructors ---------------------------------------------------

    def coord(self, name: str) -> "Expr":
        k = self.index(name)
        return Expr._mono(((((1, k, name), 1),), ()), _ONE, self)

    def coords(self) -> list["Expr"]:
        return [self.coord(c) for c in self.coordinates]

    def fn(self, name: str) -> "Expr":
        return self.jet(name)

    def jet(self, name: str, *wrt: str) -> "Expr":
        sym = self.symbol(name)
        idx = []
        for c in wrt:
            k = self.index(c)
            if c not in sym.depends:
                return Expr.zero(self)
            idx.append(k)
        return Expr._mono(((((2, name, tuple(sorted(idx))), 1),), ()), _ONE, self)

    def exp(self, arg: "Expr") -> "Expr":
        return exp(arg)

    def const(self, value) -> "Expr":
        return as_expr(value, self)

    def parse(self, text: str) -> "Expr":
        from .parser import parse_expr

        return parse_expr(text, self)


def _check_ident(name: str) -> None:
    if not name.isidentifier() or name in _RESERVED:
        raise ExprError(f"invalid identifier {name!r}")


def _same_sig(a, b):
    if a is None:
        return b
    if b is None or a is b or a == b:
        return a
    raise ChartMismatch("expressions live on different charts")


# ---------------------------------------------------------------------------


class Term(NamedTuple):
    coefficient: GaussianRational
    factors: tuple  # ((atom, exponent), ...) with the exponential, if any, last


Scalar = Union[int, Fraction, "Expr"]


class Expr:
    """Immutable exact scalar in canonical form.

    Build values through :class:`ChartSignature` helpers, the parser or
    arithmetic; the constructor trusts its input.
    """

    __slots__ = ("_t", "_sig", "_hash")

    def __init__(self, terms: dict, sig: ChartSignature | None = None):
        self._t = terms
        self._sig = sig
        self._hash = None

    # construction ----------------------------------------------------------

    @classmethod
    def _mono(cls, mono, coeff, sig):
        return cls({mono: coeff}, sig)

    @classmethod
    def zero(cls, sig: ChartSignature | None = None) -> "Expr":
        return cls({}, sig)

    @classmethod
    def one(cls, sig: ChartSignature | None = None) -> "Expr":
        return cls({_UNIT: _ONE}, sig)

    @classmethod
    def rational(cls, re, im=0, sig: ChartSignature | None = None) -> "Expr":
        c = (_q(Fraction(re)), _q(Fraction(im)))
        return cls({_UNIT: c} if _cnz(c) else {}, sig)

    # inspection ------------------------------------------------------------

    @property
    def sig(self) -> ChartSignature | None:
        return self._sig

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def terms(self) -> list[Term]:
        out = []
        for mono in sorted(self._t):
            fac, ex = mono
            factors = tuple(fac)
            if ex:
                factors = factors + (((3, ex), 1),)
            out.append(Term(GaussianRational._from(self._t[mono]), factors))
        return out

    def __len__(self):
        return len(self._t)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and _UNIT in self._t)

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise ExprError(f"{self} is not a constant")
        return GaussianRational._from(self._t.get(_UNIT, _ZERO))

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def exp_arguments(self) -> set:
        return {mono[1] for mono in self._t}

    def atoms(self) -> set:
        out = set()
        for fac, ex in self._t:
            out.update(a for a, _ in fac)
            if ex:
                out.add((3, ex))
        return out

    # equality / hashing ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Expr):
            return self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self._t == ({_UNIT: (_q(Fraction(other)), 0)} if other != 0 else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # arithmetic ------------------------------------------------------------

    def __add__(self, other):
        other = as_expr(other, self._sig)
        sig = _same_sig(self._sig, other._sig)
        if not other._t:
            return self if sig is self._sig else Expr(self._t, sig)
        if not self._t:
            return other if sig is other._sig else Expr(other._t, sig)
        d = dict(self._t)
        for m, c in other._t.items():
            old = d.get(m)
            if old is None:
                d[m] = c
            else:
                v = _cadd(old, c)
                if _cnz(v):
                    d[m] = v
                else:
                    del d[m]
        return Expr(d, sig)

    __radd__ = __add__

    def __neg__(self):
        return Expr({m: _cneg(c) for m, c in self._t.items()}, self._sig)

    def __sub__(self, other):
        return self + (-as_expr(other, self._sig))

    def __rsub__(self, other):
        return as_expr(other, self._sig) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Expr({}, self._sig)
            c = (_q(Fraction(other)), 0)
            return Expr({m: _cmul(v, c) for m, v in self._t.items()}, self._sig)
        if not isinstance(other, Expr):
            return NotImplemented
        sig = _same_sig(self._sig, other._sig)
        if not self._t or not other._t:
            return Expr({}, sig)
        d: dict = {}
        for m1, c1 in self._t.items():
            for m2, c2 in other._t.items():
                m = _mono_mul(m1, m2)
                c = _cmul(c1, c2)
                old = d.get(m)
                if old is not None:
                    c = _cadd(old, c)
                    if not _cnz(c):
                        del d[m]
                        continue
                d[m] = c
        return Expr(d, sig)

    __rmul__ = __mul__

    def inverse(self) -> "Expr":
        if len(self._t) != 1:
            raise ExprError(f"division by a non-monomial expression: {self}")
        ((m, c),) = self._t.items()
        return Expr({_mono_inv(m): _cinv(c)}, self._sig)

    def __truediv__(self, other):
        return self * as_expr(other, self._sig).inverse()

    def __rtruediv__(self, other):
        return as_expr(other, self._sig) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise ExprError("exponents must be integers")
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return Expr.one(self._sig)
        if len(self._t) == 1:
            ((m, c),) = self._t.items()
            fac, ex = m
            cc = _ONE
            for _ in range(k):
                cc = _cmul(cc, c)
            return Expr(
                {(tuple((a, e * k) for a, e in fac), tuple((a, q * k) for a, q in ex)): cc},
                self._sig,
            )
        out = Expr.one(self._sig)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # calculus ----------------------------------------------------------------

    def diff(self, coord: str | int) -> "Expr":
        return differentiate(self, coord)

    def conjugate(self) -> "Expr":
        return conjugate(self)

    # text --------------------------------------------------------------------

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for mono in sorted(self._t):
            parts.append(_term_str(self._t[mono], mono, self._sig))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"Expr({str(self)!r})"


def as_expr(value, sig: ChartSignature | None = None) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, (int, Fraction)):
        return Expr.rational(value, 0, sig)
    if isinstance(value, GaussianRational):
        return Expr.rational(value.re, value.im, sig)
    raise TypeError(f"cannot convert {type(value).__name__} to Expr")


def is_zero(e: Expr) -> bool:
    """Exact zero test.

    Terms are grouped by their exponential argument in the canonical form, and
    exponentials with distinct arguments are independent over the remaining
    atoms, so the canonical expression vanishes iff it has no terms.
    """
    return not as_expr(e)._t


I = Expr.rational(0, 1)
PI = Expr({(((PI_ATOM, 1),), ()): _ONE})


def exp(arg: Expr) -> Expr:
    """``exp(arg)`` for a rational-linear, constant-free argument."""
    arg = as_expr(arg)
    lin = []
    for (fac, ex), c in arg._t.items():
        if ex or c[1] != 0 or len(fac) != 1 or fac[0][1] != 1:
            raise ExprError(f"exp argument must be a rational-linear combination of coordinates and symbols: {arg}")
        atom = fac[0][0]
        if atom[0] == 1 or (atom[0] == 2 and not atom[2]):
            lin.append((atom, c[0]))
        else:
            raise ExprError(f"exp argument must be a rational-linear combination of coordinates and symbols: {arg}")
    lin = tuple(sorted((a, Fraction(c)) for a, c in lin))
    return Expr({((), lin): _ONE} if lin else {_UNIT: _ONE}, arg._sig)


# ---------------------------------------------------------------------------
# differentiation


def _atom_derivative(atom, k, sig):
    """d(atom)/dx_k as a dict {monomial: coeff}, or None for zero."""
    kind = atom[0]
    if kind == 0:
        return None
    if kind == 1:
        return {_UNIT: _ONE} if atom[1] == k else None
    name, idx = atom[1], atom[2]
    sym = sig.symbol(name)
    if sig.coordinates[k] not in sym.depends:
        return None
    new = tuple(sorted(idx + (k,)))
    return {((((2, name, new), 1),), ()): _ONE}


def differentiate(e: Expr, coord: str | int) -> Expr:
    """Partial derivative with respect to a coordinate (name or index)."""
    e = as_expr(e)
    sig = e._sig
    if not e._t:
        return e
    if sig is None:
        if isinstance(coord, str):
            raise ExprError(f"unknown coordinate {coord!r}")
        return Expr.zero()
    k = sig.index(coord) if isinstance(coord, str) else coord
    if not 0 <= k < sig.dim:
        raise ExprError(f"unknown coordinate index {coord!r}")
    out: dict = {}

    def acc(m, c):
        old = out.get(m)
        if old is not None:
            c = _cadd(old, c)
            if not _cnz(c):
                del out[m]
                return
        out[m] = c

    dcache: dict = {}
    for (fac, ex), c in e._t.items():
        for pos, (atom, p) in enumerate(fac):
            if atom not in dcache:
                dcache[atom] = _atom_derivative(atom, k, sig)
            da = dcache[atom]
            if da is None:
                continue
            rest = list(fac)
            if p == 1:
                del rest[pos]
            else:
                rest[pos] = (atom, p - 1)
            base = (tuple(rest), ex)
            cp = _cmul(c, (p, 0))
            for dm, dc in da.items():
                acc(_mono_mul(base, dm), _cmul(cp, dc))
        if ex:
            # d exp(L) = dL * exp(L)
            for atom, q in ex:
                if atom[0] == 1:
                    if atom[1] == k:
                        acc((fac, ex), _cmul(c, (_q(q), 0)))
                else:
                    da = _atom_derivative(atom, k, sig)
                    if da is None:
                        continue
                    for dm, dc in da.items():
                        acc(_mono_mul((fac, ex), dm), _cmul(_cmul(c, (_q(q), 0)), dc))
    return Expr(out, sig)


# ---------------------------------------------------------------------------
# conjugation


def _conj_atom(atom, sig):
    kind = atom[0]
    if kind == 0:
        return atom
    if kind == 1:
        j = sig.conj_index(atom[1])
        return (1, j, sig.coordinates[j])
    sym = sig.symbol(atom[1])
    if not sym.real:
        raise ExprError(f"conjugation of non-real opaque symbol {sym.name!r} is unsupported")
    return (2, atom[1], tuple(sorted(sig.conj_index(i) for i in atom[2])))


def conjugate(e: Expr) -> Expr:
    """Complex conjugate: ``i -> -i``, coordinates through the chart involution."""
    e = as_expr(e)
    sig = e._sig
    out: dict = {}
    for (fac, ex), c in e._t.items():
        nf = {}
        for atom, p in fac:
            a2 = _conj_atom(atom, sig) if atom[0] else atom
            nf[a2] = nf.get(a2, 0) + p
        nex = tuple(sorted((_conj_atom(a, sig), q) for a, q in ex))
        m = (tuple(sorted((a, p) for a, p in nf.items() if p)), nex)
        cc = (c[0], -c[1])
        old = out.get(m)
        if old is not None:
            cc = _cadd(old, cc)
        if _cnz(cc):
            out[m] = cc
        else:
            out.pop(m, None)
    return Expr(out, sig)


# ---------------------------------------------------------------------------
# printing (output re-parses under the grammar)


def _frac_str(x) -> str:
    x = _q(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


def _coeff_str(c) -> str:
    re, im = c
    if im == 0:
        return _frac_str(re)
    if re == 0:
        if im == 1:
            return "i"
        if im == -1:
            return "-i"
        return f"{_frac_str(im)}*i"
    sign = "-" if im < 0 else "+"
    mag = -im if im < 0 else im
    ims = "i" if mag == 1 else f"{_frac_str(mag)}*i"
    return f"({_frac_str(re)} {sign} {ims})"


def _atom_str(atom, sig) -> str:
    kind = atom[0]
    if kind == 0:
        return "pi"
    if kind == 1:
        return atom[2]
    if kind == 2:
        name, idx = atom[1], atom[2]
        if not idx:
            return name
        return "D[" + ",".join([name] + [sig.coordinates[i] for i in idx]) + "]"
    return "exp(" + _lin_str(atom[1], sig) + ")"


def _lin_str(lin, sig) -> str:
    parts = []
    for atom, q in lin:
        name = _atom_str(atom, sig)
        if q == 1:
            s = name
        elif q == -1:
            s = "-" + name
        else:
            s = f"{_frac_str(q)}*{name}"
        parts.append(s)
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _term_str(c, mono, sig) -> str:
    fac, ex = mono
    factors = []
    for atom, p in fac:
        s = _atom_str(atom, sig)
        factors.append(s if p == 1 else f"{s}^{p}")
    if ex:
        factors.append(_atom_str((3, ex), sig))
    if not factors:
        return _coeff_str(c)
    body = "*".join(factors)
    if c == _ONE:
        return body
    if c == (-1, 0):
        return "-" + body
    return _coeff_str(c) + "*" + body
