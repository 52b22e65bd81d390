from .brackets import (
    decomposable_schouten,
    divergence,
    koszul_bracket,
    lie_bracket,
    lie_derivative,
    schouten_bracket,
)
from .structures import (
    NotTwistedPoisson,
    Residual,
    TwistedPoissonReport,
    TwistedPoissonStructure,
    chain_map_residual,
    check_twisted_poisson,
    del_phi,
    function_bracket,
    jacobiator,
    residuals_of,
    symplectic_bivector,
    twisted_bracket,
)
from .tensors import (
    Form,
    MultiVector,
    VarianceMismatch,
    differential,
    evaluate,
    exterior_derivative,
    interior_product,
    pairing,
    set_max_dim,
    sharp,
    wedge,
)

__all__ = [
    "Form",
    "MultiVector",
    "NotTwistedPoisson",
    "Residual",
    "TwistedPoissonReport",
    "TwistedPoissonStructure",
    "VarianceMismatch",
    "chain_map_residual",
    "check_twisted_poisson",
    "decomposable_schouten",
    "del_phi",
    "differential",
    "divergence",
    "evaluate",
    "exterior_derivative",
    "function_bracket",
    "interior_product",
    "jacobiator",
    "koszul_bracket",
    "lie_bracket",
    "lie_derivative",
    "pairing",
    "residuals_of",
    "schouten_bracket",
    "set_max_dim",
    "sharp",
    "symplectic_bivector",
    "twisted_bracket",
    "wedge",
]
