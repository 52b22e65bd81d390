from .core import (
    I,
    PI,
    ChartMismatch,
    ChartSignature,
    Expr,
    ExprError,
    GaussianRational,
    OpaqueSymbol,
    Term,
    as_expr,
    conjugate,
    differentiate,
    exp,
    is_zero,
)
from .parser import ParseError, parse_expr
from .probe import evaluate_at, numeric_probe

__all__ = [
    "I",
    "PI",
    "ChartMismatch",
    "ChartSignature",
    "Expr",
    "ExprError",
    "GaussianRational",
    "OpaqueSymbol",
    "ParseError",
    "Term",
    "as_expr",
    "conjugate",
    "differentiate",
    "evaluate_at",
    "exp",
    "is_zero",
    "numeric_probe",
    "parse_expr",
]
