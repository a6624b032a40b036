"""Certified bounds on the psd rank of polytopes and nonnegative matrices."""

from .classify import (
    CombType3D,
    OctahedronParams,
    build_octahedron,
    classify_3d,
    double_simplex_obstruction,
    is_biplanar_octahedron,
    is_two_level,
    polygon_minimal,
    scaling_to_01,
)
from .exactnum import (
    FieldElem,
    Multiquadratic,
    RatMatrix,
    Surd,
    SurdMatrix,
    is_psd,
    rat_rank,
    surd_rank,
    sym_rank,
)
from .hadamard import (
    SignClass,
    SignPattern,
    SqrtRankResult,
    hadamard_square,
    positive_sqrt,
    sqrt_rank,
    sqrt_rank_lower_bound,
)
from .polytope import (
    HRep,
    Polytope,
    SlackMatrix,
    VRep,
    bipyramid,
    facet_as_polytope,
    facet_enumeration,
    polar_slack,
    pyramid,
    slack_matrix,
)
from .psdfact import (
    PsdFactorization,
    RankInterval,
    extend_matrix,
    facet_recursive_lower_bound,
    psd_rank_bounds,
    rank_one_factorization,
    verify_factorization,
)
from .stab import (
    Graph,
    StableSetFamily,
    is_perfect,
    odd_hole_submatrix,
    stab_minimal_check,
    stab_polytope,
    stable_sets,
)

__version__ = "0.1.0"

__all__ = [
    "bipyramid",
    "build_octahedron",
    "classify_3d",
    "CombType3D",
    "double_simplex_obstruction",
    "extend_matrix",
    "facet_as_polytope",
    "facet_enumeration",
    "facet_recursive_lower_bound",
    "FieldElem",
    "Graph",
    "hadamard_square",
    "HRep",
    "is_biplanar_octahedron",
    "is_perfect",
    "is_psd",
    "is_two_level",
    "Multiquadratic",
    "OctahedronParams",
    "odd_hole_submatrix",
    "polar_slack",
    "polygon_minimal",
    "Polytope",
    "positive_sqrt",
    "psd_rank_bounds",
    "PsdFactorization",
    "pyramid",
    "rank_one_factorization",
    "RankInterval",
    "rat_rank",
    "RatMatrix",
    "scaling_to_01",
    "SignClass",
    "SignPattern",
    "slack_matrix",
    "SlackMatrix",
    "sqrt_rank",
    "sqrt_rank_lower_bound",
    "SqrtRankResult",
    "stab_minimal_check",
    "stab_polytope",
    "stable_sets",
    "StableSetFamily",
    "Surd",
    "surd_rank",
    "SurdMatrix",
    "sym_rank",
    "verify_factorization",
    "VRep",
]
