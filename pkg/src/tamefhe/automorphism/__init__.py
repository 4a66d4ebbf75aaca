"""Key generation: unimodular/affine factors, triangular factors and tame pairs."""

from .matrices import (
    AffineMap,
    UnimodularMatrix,
    bezout_min,
    determinant,
    gen_affine,
    gen_block_diagonal,
    gen_unimodular_2x2,
    gen_unimodular_n,
    unimodular_2x2_from,
)
from .tame import (
    AutomorphismPair,
    Factor,
    GenerationError,
    InverseReport,
    PlanInfeasible,
    TamePlan,
    check_inverse,
    fingerprint,
    gen_tame,
    plan_tame,
    verify_inverse_pair,
)
from .triangular import (
    ContractViolation,
    TriangularMap,
    TriangularParams,
    gen_generic_triangular,
    gen_segmented_triangular,
    invert_segmented_triangular,
    invert_triangular,
)

__all__ = [
    "AffineMap",
    "AutomorphismPair",
    "ContractViolation",
    "Factor",
    "GenerationError",
    "InverseReport",
    "PlanInfeasible",
    "TamePlan",
    "TriangularMap",
    "TriangularParams",
    "UnimodularMatrix",
    "bezout_min",
    "check_inverse",
    "determinant",
    "fingerprint",
    "gen_affine",
    "gen_block_diagonal",
    "gen_generic_triangular",
    "gen_segmented_triangular",
    "gen_tame",
    "gen_unimodular_2x2",
    "gen_unimodular_n",
    "invert_segmented_triangular",
    "invert_triangular",
    "plan_tame",
    "unimodular_2x2_from",
    "verify_inverse_pair",
]
