"""Builders for the shipped example corpus.

Each builder returns a :class:`StructureFile`; the TOML files under
``tpq/corpus`` are these models written out with :func:`save_structure`.
"""
from __future__ import annotations

from fractions import Fraction

from ..expr import I, ChartSignature, OpaqueSymbol, exp
from ..geom import Form, MultiVector, differential, sharp, symplectic_bivector, wedge
from ..liealg import AlgForm, AlgMultiVector, build_gl_subalgebra
from .structfile import LieSection, StructureFile

__all__ = ["EXAMPLES", "build_example", "darboux_form", "ex3_structure", "tautological_form"]


def darboux_form(sig: ChartSignature, coords) -> Form:
    """``sum_k dx_{2k-1} ^ dx_{2k}`` over the listed coordinates."""
    out = Form.zero(sig, 2)
    for a, b in zip(coords[::2], coords[1::2]):
        out = out + Form.basis(sig, a, b)
    return out


def tautological_form(sig: ChartSignature, coords) -> Form:
    """``sum_k x_{2k-1} dx_{2k}``, whose differential is the Darboux form."""
    out = Form.zero(sig, 1)
    for a, b in zip(coords[::2], coords[1::2]):
        out = out + Form.basis(sig, b) * sig.coord(a)
    return out


def ex1() -> StructureFile:
    sig = ChartSignature(("x1", "x2", "x3"))
    return StructureFile(
        chart=sig,
        bivector=MultiVector.basis(sig, "x1", "x2"),
        forms={3: Form.basis(sig, "x1", "x2", "x3")},
        name="ex1",
    )


def ex2() -> StructureFile:
    coords = ("x1", "x2", "x3", "x4")
    sig = ChartSignature(coords, opaque=(OpaqueSymbol("f", coords),))
    w0 = darboux_form(sig, coords)
    L0 = symplectic_bivector(w0)
    f = sig.fn("f")
    return StructureFile(
        chart=sig,
        bivector=L0 * f,
        forms={3: wedge(w0, differential(f, sig)) * (-(f ** -2))},
        name="ex2",
    )


def ex3_structure(with_f: bool = True, n: int = 2):
    """Chart, ``Lambda`` and ``phi`` on ``R^{2n} x R``; ``f`` opaque or zero."""
    coords = tuple(f"x{k}" for k in range(1, 2 * n + 1))
    opaque = (OpaqueSymbol("f", coords),) if with_f else ()
    sig = ChartSignature(coords + ("t",), opaque=opaque)
    w0 = darboux_form(sig, coords)
    L0 = symplectic_bivector(w0, coords)
    t = sig.coord("t")
    dt = Form.basis(sig, "t")
    core = L0
    if with_f:
        core = core + wedge(sharp(L0, differential(sig.fn("f"), sig)), MultiVector.basis(sig, "t"))
    Lam = core * exp(t)
    phi = wedge(w0, dt) * (-exp(-t))
    return sig, Lam, phi, L0, w0


def ex3() -> StructureFile:
    sig, Lam, phi, _, _ = ex3_structure(True)
    return StructureFile(chart=sig, bivector=Lam, forms={3: phi}, name="ex3")


def ex4() -> StructureFile:
    """The ``f = 0`` instance of ``ex3``, which is exact: ``Lambda = del_phi X0``
    with ``X0 = -L0#(alpha0) - d/dt``.  The bundle uses ``Z = -X0``, ``omega = 0``."""
    sig, Lam, phi, L0, _ = ex3_structure(False)
    coords = sig.coordinates[:-1]
    a0 = tautological_form(sig, coords)
    X0 = -sharp(L0, a0) - MultiVector.basis(sig, "t")
    return StructureFile(
        chart=sig,
        bivector=Lam,
        forms={3: phi, 2: Form.zero(sig, 2)},
        Z=-X0,
        candidates={"X0": X0, "Z": -X0, "Phi": Form.zero(sig, 2)},
        name="ex4",
    )


def ex3_prequant() -> StructureFile:
    """``f = 0`` instance with ``Z = d/dt`` and ``Phi = d(e^{-t} alpha0)``, and
    the bundle ``omega = -2 pi i e^{-t} alpha0`` realising it."""
    from ..expr import PI
    from ..geom import exterior_derivative

    sig, Lam, phi, _, _ = ex3_structure(False)
    coords = sig.coordinates[:-1]
    a0 = tautological_form(sig, coords)
    t = sig.coord("t")
    Z = MultiVector.basis(sig, "t")
    Phi = exterior_derivative(a0 * exp(-t))
    return StructureFile(
        chart=sig,
        bivector=Lam,
        forms={3: phi},
        omega=a0 * (exp(-t) * (-2) * PI * I),
        Z=Z,
        candidates={"Z": Z, "Phi": Phi},
        name="ex3-prequant",
    )


def ex6() -> StructureFile:
    G = build_gl_subalgebra([1, 2], [1, 2, 3])
    r = AlgMultiVector.basis(G, "e11", "e22") + AlgMultiVector.basis(G, "e13", "e23")
    e = lambda n: AlgForm.basis(G, n)  # noqa: E731
    phi = -(e("e11") + e("e22")).wedge(e("e13")).wedge(e("e23"))
    return StructureFile(lie=LieSection(G, r, phi, {"gl": {"rows": [1, 2], "cols": [1, 2, 3]}}), name="ex6")


def quant51(n: int = 2) -> StructureFile:
    """Wirtinger chart ``(z_1..z_n, zb_1..zb_n, t)`` with opaque real ``f(z, zb)``."""
    if n < 1:
        raise ValueError("n must be positive")
    zs = [f"z{k}" for k in range(1, n + 1)]
    zbs = [f"zb{k}" for k in range(1, n + 1)]
    sig = ChartSignature(
        tuple(zs + zbs + ["t"]),
        conjugation=tuple(zip(zs, zbs)),
        opaque=(OpaqueSymbol("f", tuple(zs + zbs)),),
    )
    t = sig.coord("t")
    d = lambda *c: MultiVector.basis(sig, *c)  # noqa: E731
    Lam = MultiVector.zero(sig, 2)
    dzz = Form.zero(sig, 2)
    for z, zb in zip(zs, zbs):
        Lam = Lam + d(z, zb) + wedge(d(zb) * sig.jet("f", z) - d(z) * sig.jet("f", zb), d("t"))
        dzz = dzz + Form.basis(sig, z, zb)
    Lam = Lam * (-2 * I * exp(t))
    phi = wedge(dzz, Form.basis(sig, "t")) * (-I / 2 * exp(-t))
    f = sig.fn("f")
    g1 = f + t
    return StructureFile(
        chart=sig,
        bivector=Lam,
        forms={3: phi},
        polarization=[Form.basis(sig, z) for z in zs],
        candidates={
            "g": [g1, g1 * g1],
            "chi": [sig.parse("exp(1/2*f)"), sig.parse("exp(-1/2*t)")],
        },
        name="quant51",
    )


EXAMPLES = {
    "ex1": ex1,
    "ex2": ex2,
    "ex3": ex3,
    "ex4": ex4,
    "ex6": ex6,
    "quant51": quant51,
}


def build_example(name: str, n: int | None = None) -> StructureFile:
    if name not in EXAMPLES:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    if name == "quant51":
        return quant51(n or 2)
    return EXAMPLES[name]()
