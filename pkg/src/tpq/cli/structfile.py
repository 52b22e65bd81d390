"""Structure files: TOML in, validated in-memory models out (and back).

Layout::

    [chart]
    coordinates = ["x1", "x2", "t"]
    conjugate = [["z1", "zb1"]]              # optional
    opaque = [{name = "f", depends = ["x1", "x2"], real = true}]

    [bivector]                               # 1-based, strictly increasing
    "1,2" = "exp(t)"

    [form_3]
    "1,2,3" = "-exp(-t)"

    [bundle]
    omega = {"2" = "-2*pi*i*x1*exp(-t)"}
    Z = {"3" = "1"}

    [polarization]
    generators = [{"1" = "1"}, {"2" = "1"}]
    complement = [{"3" = "1"}]               # optional

    [lie]
    gl = {rows = [1, 2], cols = [1, 2, 3]}   # or basis + brackets
    r = {"e11,e22" = "1"}
    phi = {"e11,e13,e23" = "-1"}

    [candidates]
    Z = {"3" = "1"}
    Phi = {"1,2" = "exp(-t)"}
    X0 = {"1" = "-x1"}
    g = ["f + t"]
    chi = ["exp(1/2*f)"]
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib
import tomli_w

from ..expr import ChartSignature, Expr, ExprError, OpaqueSymbol, parse_expr
from ..geom import Form, MultiVector
from ..liealg import (
    AlgForm,
    AlgMultiVector,
    LieAlgebraError,
    LieAlgebraModel,
    build_gl_subalgebra,
    build_matrix_subalgebra,
)

__all__ = [
    "StructureError",
    "StructureFile",
    "LieSection",
    "load_structure",
    "loads_structure",
    "save_structure",
    "dumps_structure",
]


class StructureError(ValueError):
    """Invalid structure file; ``where`` names the offending section/key."""

    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


@dataclass
class LieSection:
    algebra: LieAlgebraModel
    r: AlgMultiVector
    phi: AlgForm
    source: dict = field(default_factory=dict)


@dataclass
class StructureFile:
    chart: ChartSignature | None = None
    bivector: MultiVector | None = None
    forms: dict = field(default_factory=dict)  # grade -> Form
    omega: Form | None = None
    Z: MultiVector | None = None
    polarization: list | None = None
    complement: list | None = None
    lie: LieSection | None = None
    candidates: dict = field(default_factory=dict)
    name: str = ""

    def form(self, k: int) -> Form | None:
        return self.forms.get(k)

    def phi(self) -> Form:
        return self.forms.get(3) or Form.zero(self.chart, 3)


# ---------------------------------------------------------------------------
# loading


def _parse(text, sig, where) -> Expr:
    if isinstance(text, bool):
        raise StructureError("expected an expression string", where)
    if isinstance(text, int):
        text = str(text)
    if not isinstance(text, str):
        raise StructureError("expected an expression string", where)
    try:
        return parse_expr(text, sig)
    except ExprError as e:
        raise StructureError(str(e), where) from None


def _index_key(key: str, dim: int, grade: int | None, where: str) -> tuple:
    try:
        idx = tuple(int(p) - 1 for p in str(key).split(","))
    except ValueError:
        raise StructureError(f"component key {key!r} is not a comma-separated index list", where) from None
    if grade is not None and len(idx) != grade:
        raise StructureError(f"component key {key!r} has {len(idx)} indices, expected {grade}", where)
    if any(not 0 <= i < dim for i in idx):
        raise StructureError(f"component key {key!r} out of range for dimension {dim}", where)
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise StructureError("indices must be strictly increasing", f"{where}[{key}]")
    return idx


def _tensor(cls, table, sig, grade, where):
    if not isinstance(table, dict):
        raise StructureError("expected a table of components", where)
    comps = {}
    for key, val in table.items():
        idx = _index_key(key, sig.dim, grade, where)
        comps[idx] = _parse(val, sig, f"{where}[{key}]")
    return cls(sig, grade, comps)


def _chart(data) -> ChartSignature:
    if "chart" not in data:
        raise StructureError("missing [chart]")
    ch = data["chart"]
    coords = ch.get("coordinates")
    if not isinstance(coords, list) or not coords or not all(isinstance(c, str) for c in coords):
        raise StructureError("coordinates must be a nonempty list of names", "chart")
    pairs = ch.get("conjugate", [])
    opaque = []
    for k, o in enumerate(ch.get("opaque", [])):
        if isinstance(o, str):
            o = {"name": o, "depends": coords}
        if not isinstance(o, dict) or "name" not in o:
            raise StructureError("opaque entries need a name", f"chart.opaque[{k}]")
        opaque.append(OpaqueSymbol(o["name"], tuple(o.get("depends", ())), bool(o.get("real", True))))
    try:
        return ChartSignature(tuple(coords), tuple(tuple(p) for p in pairs), tuple(opaque))
    except ExprError as e:
        raise StructureError(str(e), "chart") from None


def _lie(data) -> LieSection:
    where = "lie"
    try:
        if "gl" in data:
            gl = data["gl"]
            L = build_gl_subalgebra(gl["rows"], gl["cols"])
        elif "entries" in data:
            L = build_matrix_subalgebra([tuple(e) for e in data["entries"]])
        elif "basis" in data:
            br = {}
            for key, out in data.get("brackets", {}).items():
                a, b = (s.strip() for s in key.split(","))
                br[(a, b)] = {k: Fraction(v) for k, v in out.items()}
            L = LieAlgebraModel(data["basis"], br)
        else:
            raise StructureError("needs gl, entries or basis", where)
    except LieAlgebraError as e:
        raise StructureError(str(e), where) from None
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, StructureError):
            raise
        raise StructureError(f"malformed algebra description: {e}", where) from None

    def elem(cls, table, grade, name):
        comps = {}
        for key, val in table.items():
            names = tuple(s.strip() for s in key.split(","))
            if grade is not None and len(names) != grade:
                raise StructureError(f"key {key!r} should have {grade} entries", f"{where}.{name}")
            try:
                ids = [L.index(n) for n in names]
            except LieAlgebraError as e:
                raise StructureError(str(e), f"{where}.{name}") from None
            if any(a >= b for a, b in zip(ids, ids[1:])):
                raise StructureError("indices must be strictly increasing", f"{where}.{name}[{key}]")
            try:
                comps[names] = Fraction(str(val))
            except ValueError:
                raise StructureError(f"coefficient {val!r} is not an exact rational", f"{where}.{name}[{key}]") from None
        return cls(L, grade, comps)

    r = elem(AlgMultiVector, data.get("r", {}), 2, "r")
    phi = elem(AlgForm, data.get("phi", {}), 3, "phi")
    return LieSection(L, r, phi, dict(data))


def loads_structure(text: str, name: str = "") -> StructureFile:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise StructureError(f"malformed TOML: {e}") from None
    out = StructureFile(name=name)
    if "lie" in data:
        out.lie = _lie(data["lie"])
        if "chart" not in data:
            return out
    sig = _chart(data)
    out.chart = sig
    if "bivector" in data:
        out.bivector = _tensor(MultiVector, data["bivector"], sig, 2, "bivector")
    for k in (1, 2, 3):
        key = f"form_{k}"
        if key in data:
            out.forms[k] = _tensor(Form, data[key], sig, k, key)
    if "bundle" in data:
        b = data["bundle"]
        if "omega" in b:
            out.omega = _tensor(Form, b["omega"], sig, 1, "bundle.omega")
        if "Z" in b:
            out.Z = _tensor(MultiVector, b["Z"], sig, 1, "bundle.Z")
    if "polarization" in data:
        p = data["polarization"]
        gens = p.get("generators")
        if not isinstance(gens, list):
            raise StructureError("generators must be a list of 1-form tables", "polarization")
        out.polarization = [_tensor(Form, g, sig, 1, f"polarization.generators[{i}]") for i, g in enumerate(gens)]
        if "complement" in p:
            out.complement = [
                _tensor(Form, g, sig, 1, f"polarization.complement[{i}]") for i, g in enumerate(p["complement"])
            ]
    if "candidates" in data:
        c = data["candidates"]
        for key, cls, grade in (("Z", MultiVector, 1), ("X0", MultiVector, 1), ("Phi", Form, 2)):
            if key in c:
                out.candidates[key] = _tensor(cls, c[key], sig, grade, f"candidates.{key}")
        for key in ("g", "chi"):
            if key in c:
                vals = c[key] if isinstance(c[key], list) else [c[key]]
                out.candidates[key] = [_parse(v, sig, f"candidates.{key}[{i}]") for i, v in enumerate(vals)]
        unknown = set(c) - {"Z", "X0", "Phi", "g", "chi"}
        if unknown:
            raise StructureError(f"unknown candidate entries {sorted(unknown)}", "candidates")
    return out


def load_structure(path) -> StructureFile:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise StructureError(f"cannot read {p}: {e.strerror}") from None
    return loads_structure(text, name=p.stem)


# ---------------------------------------------------------------------------
# saving


def _table(T) -> dict:
    return T.to_strings()


def _alg_table(T) -> dict:
    names = T.algebra.names
    return {",".join(names[i] for i in k): str(v) for k, v in T.items()}


def dumps_structure(sf: StructureFile) -> str:
    d: dict[str, Any] = {}
    if sf.chart is not None:
        sig = sf.chart
        ch: dict[str, Any] = {"coordinates": list(sig.coordinates)}
        if sig.conjugation:
            ch["conjugate"] = [list(p) for p in sig.conjugation]
        if sig.opaque:
            ch["opaque"] = [{"name": o.name, "depends": list(o.depends), "real": o.real} for o in sig.opaque]
        d["chart"] = ch
    if sf.bivector is not None:
        d["bivector"] = _table(sf.bivector)
    for k in sorted(sf.forms):
        d[f"form_{k}"] = _table(sf.forms[k])
    if sf.omega is not None or sf.Z is not None:
        b = {}
        if sf.omega is not None:
            b["omega"] = _table(sf.omega)
        if sf.Z is not None:
            b["Z"] = _table(sf.Z)
        d["bundle"] = b
    if sf.polarization is not None:
        p: dict[str, Any] = {"generators": [_table(g) for g in sf.polarization]}
        if sf.complement is not None:
            p["complement"] = [_table(g) for g in sf.complement]
        d["polarization"] = p
    if sf.lie is not None:
        src = sf.lie.source
        lie: dict[str, Any] = {}
        if "gl" in src:
            lie["gl"] = src["gl"]
        elif "entries" in src:
            lie["entries"] = src["entries"]
        else:
            L = sf.lie.algebra
            lie["basis"] = list(L.names)
            lie["brackets"] = {
                f"{L.names[i]},{L.names[j]}": {L.names[k]: str(v) for k, v in sorted(vec.items())}
                for (i, j), vec in sorted(L._table.items())
            }
        lie["r"] = _alg_table(sf.lie.r)
        lie["phi"] = _alg_table(sf.lie.phi)
        d["lie"] = lie
    if sf.candidates:
        c: dict[str, Any] = {}
        for key in ("Z", "X0", "Phi"):
            if key in sf.candidates:
                c[key] = _table(sf.candidates[key])
        for key in ("g", "chi"):
            if key in sf.candidates:
                c[key] = [str(e) for e in sf.candidates[key]]
        d["candidates"] = c
    return tomli_w.dumps(d)


def save_structure(sf: StructureFile, path) -> None:
    Path(path).write_text(dumps_structure(sf), encoding="utf-8")
