"""Residual reports shared by the checkers and the command line."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .expr import Expr

__all__ = ["Residual", "Report", "residuals_of"]


@dataclass(frozen=True)
class Residual:
    where: str
    expr: Any  # Expr, or Fraction for Lie-algebra checks

    def as_dict(self) -> dict:
        return {"where": self.where, "expr": str(self.expr)}


def residuals_of(T, label: str) -> list[Residual]:
    """Nonzero components of a tensor (or a scalar) as labelled residuals."""
    if isinstance(T, Expr):
        return [] if T.is_zero() else [Residual(label, T)]
    out = []
    for idx, v in T.items():
        out.append(Residual(f"{label}[{','.join(str(i + 1) for i in idx)}]", v))
    return out


@dataclass
class Report:
    """Outcome of one check; ``status`` is ``pass`` exactly when there are no
    residuals, unless an error was recorded."""

    check: str
    residuals: list = field(default_factory=list)
    assumptions: list = field(default_factory=list)
    millis: int = 0
    error: str | None = None
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.error is not None:
            return "error"
        return "fail" if self.residuals else "pass"

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def extend(self, residuals) -> "Report":
        self.residuals.extend(residuals)
        return self

    def as_dict(self, timing: bool = True) -> dict:
        d = {
            "check": self.check,
            "status": self.status,
            "residuals": [r.as_dict() for r in self.residuals],
            "assumptions": list(self.assumptions),
            "millis": self.millis if timing else 0,
        }
        if self.error is not None:
            d["error"] = self.error
        if self.details:
            d["details"] = self.details
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.as_dict(timing), indent=2, sort_keys=False)
