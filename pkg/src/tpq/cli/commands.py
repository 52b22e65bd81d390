"""Command dispatch: every command turns a structure file into a :class:`Report`."""
from __future__ import annotations

import random
import time
from importlib import resources
from itertools import combinations
from pathlib import Path

from ..expr import Expr, ExprError
from ..geom import (
    Form,
    NotTwistedPoisson,
    TwistedPoissonStructure,
    chain_map_residual,
    check_twisted_poisson,
    differential,
    jacobiator,
    set_max_dim,
)
from ..liealg import (
    LieAlgebraError,
    check_twisted_structure,
    ltp_cohomology,
    solve_prequantization,
)
from ..prequant import LineBundleModel, check_prequantization, homomorphism_residual
from ..quant import (
    NotIsotropic,
    Polarization,
    check_polarization,
    half_density_D,
    membership_residual,
    quantizable_pair_check,
    quantum_operator,
)
from ..randomgen import random_form, random_poly
from ..report import Report, Residual, residuals_of
from .examples import EXAMPLES, build_example
from .structfile import StructureError, StructureFile, load_structure

__all__ = ["COMMANDS", "CommandError", "run_command", "resolve_file", "exit_code"]


class CommandError(Exception):
    """A command could not run on the given input (reported as ``error``)."""


def _need(sf: StructureFile, *sections: str) -> None:
    for s in sections:
        present = {
            "chart": sf.chart is not None,
            "bivector": sf.bivector is not None,
            "lie": sf.lie is not None,
            "polarization": sf.polarization is not None,
        }.get(s)
        if present is None:
            present = s.split(".", 1)[1] in sf.candidates
        if not present:
            what = f"[{s}] section" if "." not in s else f"{s} entry"
            raise CommandError(f"missing {what} required by this command")


def _structure(sf: StructureFile) -> TwistedPoissonStructure:
    _need(sf, "chart", "bivector")
    return TwistedPoissonStructure(sf.bivector, sf.phi())


def _bundle(sf: StructureFile, S: TwistedPoissonStructure) -> LineBundleModel:
    return LineBundleModel(S, sf.omega, sf.Z)


def _polarization(sf: StructureFile, S) -> Polarization:
    _need(sf, "polarization")
    return Polarization(S, sf.polarization, sf.complement)


# ---------------------------------------------------------------------------
# commands


def cmd_check_structure(sf: StructureFile, opts) -> Report:
    rep = Report("check-structure")
    if sf.chart is None and sf.lie is not None:
        res = check_twisted_structure(sf.lie.r, sf.lie.phi)
        rep.extend(Residual(w, v) for w, v in res.residuals)
        return rep
    _need(sf, "chart", "bivector")
    res = check_twisted_poisson(sf.bivector, sf.phi())
    return rep.extend(res.residuals)


def cmd_check_prequant(sf: StructureFile, opts) -> Report:
    _need(sf, "candidates.Z")
    S = _structure(sf)
    Phi = sf.candidates.get("Phi", Form.zero(sf.chart, 2))
    rep = check_prequantization(S, sf.candidates["Z"], Phi)
    rep.check = "check-prequant"
    return rep


LIE_CONVENTION = (
    "left-invariant reading: d_phi P(a_0..a_k) = sum_{i<j} (-1)^(i+j) P({a_i,a_j}^phi, ...), "
    "{a,b}^phi(y) = db(r#a,y) - da(r#b,y) + phi(r#a,r#b,y), (r#a)^m = sum_j a_j r^{jm}"
)


def cmd_solve_prequant_lie(sf: StructureFile, opts) -> Report:
    _need(sf, "lie")
    r, phi = sf.lie.r, sf.lie.phi
    rep = Report("solve-prequant-lie")
    pre = check_twisted_structure(r, phi)
    if not pre.ok:
        raise CommandError("(r, phi) is not a twisted structure on the algebra")
    res = solve_prequantization(r, phi)
    rep.assumptions = list(res.assumptions)
    if res.solvable:
        rep.details = {"Z": res.Z.to_strings(), "Phi": res.Phi.to_strings(), "convention": LIE_CONVENTION}
        return rep
    cert = res.certificate
    rep.details = {
        "convention": LIE_CONVENTION,
        "certificate": cert.to_strings() if cert is not None else {},
        "certificate_valid": bool(cert is not None and res.certificate_valid(r, phi)),
    }
    # the certificate pairs nontrivially with r, which is what makes the system infeasible
    value = sum((a * b for a, b in zip(cert.vector(), r.vector())), start=0) if cert is not None else 0
    rep.residuals.append(Residual("certificate(r)", value))
    return rep


def cmd_check_polarization(sf: StructureFile, opts) -> Report:
    S = _structure(sf)
    P = _polarization(sf, S)
    rep = check_polarization(P)
    rep.check = "check-polarization"
    rep.details = {"complement": P.complement_labels()}
    return rep


def cmd_membership(sf: StructureFile, opts) -> Report:
    _need(sf, "candidates.g")
    S = _structure(sf)
    P = _polarization(sf, S)
    rep = Report("membership")
    gs = sf.candidates["g"]
    for k, g in enumerate(gs, 1):
        for res in membership_residual(P, differential(g, sf.chart)):
            rep.residuals.append(Residual(f"g{k}: {res.where}", res.expr))
    if len(gs) >= 2 and not rep.residuals:
        pair = quantizable_pair_check(P, gs[0], gs[1])
        if pair.error is not None:
            raise CommandError(pair.error)
        rep.extend(Residual(f"pair(g1,g2): {r.where}", r.expr) for r in pair.residuals)
    return rep


def cmd_h0_residual(sf: StructureFile, opts) -> Report:
    _need(sf, "candidates.chi")
    S = _structure(sf)
    P = _polarization(sf, S)
    B = _bundle(sf, S)
    rep = Report("h0-residual")
    for k, chi in enumerate(sf.candidates["chi"], 1):
        for j, a in enumerate(P.generators, 1):
            v = half_density_D(B, a, chi).chi
            if not v.is_zero():
                rep.residuals.append(Residual(f"chi{k}: D_a{j}", v))
    return rep


def cmd_quantum_op(sf: StructureFile, opts) -> Report:
    """Apply each ``g`` to each ``chi`` and check the image stays in ``H_0``."""
    _need(sf, "candidates.g", "candidates.chi")
    S = _structure(sf)
    P = _polarization(sf, S)
    B = _bundle(sf, S)
    rep = Report("quantum-op")
    images = {}
    for i, g in enumerate(sf.candidates["g"], 1):
        for k, chi in enumerate(sf.candidates["chi"], 1):
            img = quantum_operator(B, g, chi).chi
            images[f"g{i}(chi{k})"] = str(img)
            for j, a in enumerate(P.generators, 1):
                v = half_density_D(B, a, img).chi
                if not v.is_zero():
                    rep.residuals.append(Residual(f"g{i}(chi{k}): D_a{j}", v))
    rep.details = {"images": images}
    return rep


def cmd_cohomology_lie(sf: StructureFile, opts) -> Report:
    _need(sf, "lie")
    r, phi = sf.lie.r, sf.lie.phi
    rep = Report("cohomology-lie")
    pre = check_twisted_structure(r, phi)
    rep.extend(Residual(w, v) for w, v in pre.residuals)
    if rep.residuals:
        return rep
    n = r.algebra.dim
    rep.details = {"dimensions": [ltp_cohomology(r, phi, k) for k in range(n + 1)], "convention": LIE_CONVENTION}
    return rep


def _trials(opts) -> int:
    return opts.get("n") or 5


def cmd_jacobiator(sf: StructureFile, opts) -> Report:
    S = _structure(sf)
    rng = random.Random(opts.get("seed", 0))
    rep = Report("jacobiator", assumptions=[f"seed={opts.get('seed', 0)}", f"trials={_trials(opts)}"])
    sig = sf.chart
    for t in range(_trials(opts)):
        f, g, h = (random_poly(sig, rng) for _ in range(3))
        v = jacobiator(S, f, g, h)
        if not v.is_zero():
            rep.residuals.append(Residual(f"trial {t + 1}", v))
    return rep


def cmd_chainmap(sf: StructureFile, opts) -> Report:
    S = _structure(sf)
    rng = random.Random(opts.get("seed", 0))
    rep = Report("chainmap", assumptions=[f"seed={opts.get('seed', 0)}", f"trials={_trials(opts)}"])
    sig = sf.chart
    for t in range(_trials(opts)):
        for k in range(3):
            eta = random_form(sig, rng, k)
            rep.extend(residuals_of(chain_map_residual(S, eta), f"trial {t + 1} grade {k}"))
    return rep


def _homomorphism(sf: StructureFile, opts) -> Report:
    """``{x_i, x_j}^ - [x_i^, x_j^]^phi`` on the unit section for coordinate pairs."""
    S = _structure(sf)
    B = _bundle(sf, S)
    rep = Report("homomorphism")
    one = Expr.one(sf.chart)
    coords = sf.chart.coords()
    for (i, a), (j, b) in combinations(enumerate(coords), 2):
        v = homomorphism_residual(B, a, b, one)
        if not v.is_zero():
            rep.residuals.append(Residual(f"x{i + 1},x{j + 1}", v))
    return rep


def _subchecks(sf: StructureFile) -> list:
    if sf.chart is None:
        return [cmd_check_structure, cmd_solve_prequant_lie, cmd_cohomology_lie]
    out = [cmd_check_structure]
    if "Z" in sf.candidates:
        out.append(cmd_check_prequant)
    if sf.Z is not None or sf.omega is not None:
        out.append(_homomorphism)
    if sf.polarization is not None:
        out.append(cmd_check_polarization)
        if "g" in sf.candidates:
            out.append(cmd_membership)
        if "chi" in sf.candidates:
            out.append(cmd_h0_residual)
        if "g" in sf.candidates and "chi" in sf.candidates:
            out.append(cmd_quantum_op)
    return out


def cmd_run_example(sf: StructureFile, opts) -> Report:
    """Run every applicable check on a corpus model and merge the reports in order."""
    rep = Report(f"run-example:{sf.name}")
    statuses = {}
    for fn in _subchecks(sf):
        sub = _guarded(fn, sf, opts)
        statuses[sub.check] = sub.status
        rep.extend(Residual(f"{sub.check}: {r.where}", r.expr) for r in sub.residuals)
        for a in sub.assumptions:
            if a not in rep.assumptions:
                rep.assumptions.append(a)
        if sub.error is not None and rep.error is None:
            rep.error = f"{sub.check}: {sub.error}"
    rep.details = {"subchecks": statuses}
    return rep


COMMANDS = {
    "check-structure": cmd_check_structure,
    "check-prequant": cmd_check_prequant,
    "solve-prequant-lie": cmd_solve_prequant_lie,
    "check-polarization": cmd_check_polarization,
    "membership": cmd_membership,
    "h0-residual": cmd_h0_residual,
    "quantum-op": cmd_quantum_op,
    "cohomology-lie": cmd_cohomology_lie,
    "jacobiator": cmd_jacobiator,
    "chainmap": cmd_chainmap,
    "run-example": cmd_run_example,
}


def _guarded(fn, sf, opts) -> Report:
    name = fn.__name__.removeprefix("cmd_").removeprefix("_").replace("_", "-")
    try:
        return fn(sf, opts)
    except (CommandError, StructureError, NotTwistedPoisson, NotIsotropic, LieAlgebraError) as e:
        return Report(name, error=str(e))
    except (ExprError, ValueError, TypeError) as e:
        return Report(name, error=f"{type(e).__name__}: {e}")


def resolve_file(arg: str) -> Path | None:
    """A path on disk, or failing that a shipped corpus file of that name."""
    p = Path(arg)
    if p.exists():
        return p
    stem = p.name.removesuffix(".toml")
    if stem in EXAMPLES:
        ref = resources.files("tpq") / "corpus" / f"{stem}.toml"
        if ref.is_file():
            return Path(str(ref))
    return None


def run_command(cmd: str, file: str, options: dict | None = None) -> Report:
    """Load ``file`` and run ``cmd`` on it; never raises for bad input."""
    opts = dict(options or {})
    start = time.perf_counter()
    if cmd not in COMMANDS:
        return Report(cmd, error=f"unknown command {cmd!r}; choose from {', '.join(COMMANDS)}")
    if opts.get("max_dim"):
        set_max_dim(opts["max_dim"])
    try:
        if cmd == "run-example":
            stem = Path(file).name.removesuffix(".toml")
            if stem in EXAMPLES:
                sf = build_example(stem, opts.get("n"))
            else:
                path = resolve_file(file)
                if path is None:
                    raise StructureError(f"unknown example {file!r}; choose from {', '.join(EXAMPLES)}")
                sf = load_structure(path)
        else:
            path = resolve_file(file)
            if path is None:
                raise StructureError(f"cannot read {file}: no such file")
            sf = load_structure(path)
    except (StructureError, ValueError) as e:
        rep = Report(cmd, error=str(e))
    else:
        rep = _guarded(COMMANDS[cmd], sf, opts)
        if cmd != "run-example":
            rep.check = cmd
    rep.millis = int((time.perf_counter() - start) * 1000)
    return rep


def exit_code(rep: Report) -> int:
    return {"pass": 0, "fail": 1}.get(rep.status, 2)
