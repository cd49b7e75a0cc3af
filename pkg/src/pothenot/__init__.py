"""Planar three-landmark resection with full multiplicity accounting.

Given a triangle of known landmarks and the cosines of the three angles a
hidden observer subtends between pairs of them, the package recovers every
admissible observer position, names the region of the cosine surface the
measurement lies in, predicts the solution count from that region alone,
and can verify the prediction by brute-force search.
"""

__version__ = "0.1.0"

from .errors import (
    AmbiguousBand,
    BoundaryHit,
    DegenerateBase,
    EmptyRegion,
    IdenticallyZero,
    Inconsistent,
    InvalidGrid,
    IoFailure,
    NotOnEllipse,
    NotOnSurface,
    VertexCollision,
)
from .tolerances import DEFAULT, Tolerances
from .geometry import (
    BaseTriangle,
    CosTriple,
    PlanarPoint,
    SpecialPoints,
    as_triple,
    forward_map,
    forward_map_many,
    limit_set_membership,
    observer_distances,
    pillow_gradient,
    pillow_value,
    special_points,
    triangle_from_angles,
    triangle_from_landmarks,
    triangle_from_sides,
)
from .grunert import (
    LambdaCoeffs,
    Solution,
    SolutionSet,
    grunert_residual,
    lambda_coeffs,
    quartic_roots,
    solve_on_pillowcase,
    trilaterate,
)
from .regions import (
    CountPrediction,
    RegionLabel,
    arc_membership,
    classify,
    classify_and_count,
    component_of,
    count_prediction,
)
from .oracle import (
    OracleConfig,
    OracleReport,
    SweepReport,
    SweepRow,
    oracle_count,
    oracle_count_auto,
    region_sweep,
)
from .surface import export_decomposition, param_surface, sample_decomposition
from .estimators import AngleCosineTransformer, ResectionSolver

__all__ = [
    "__version__",
    "AmbiguousBand",
    "AngleCosineTransformer",
    "BaseTriangle",
    "BoundaryHit",
    "CosTriple",
    "CountPrediction",
    "DEFAULT",
    "DegenerateBase",
    "EmptyRegion",
    "IdenticallyZero",
    "Inconsistent",
    "InvalidGrid",
    "IoFailure",
    "LambdaCoeffs",
    "NotOnEllipse",
    "NotOnSurface",
    "OracleConfig",
    "OracleReport",
    "PlanarPoint",
    "RegionLabel",
    "ResectionSolver",
    "Solution",
    "SolutionSet",
    "SpecialPoints",
    "SweepReport",
    "SweepRow",
    "Tolerances",
    "VertexCollision",
    "arc_membership",
    "as_triple",
    "classify",
    "classify_and_count",
    "component_of",
    "count_prediction",
    "export_decomposition",
    "forward_map",
    "forward_map_many",
    "grunert_residual",
    "lambda_coeffs",
    "limit_set_membership",
    "observer_distances",
    "oracle_count",
    "oracle_count_auto",
    "param_surface",
    "pillow_gradient",
    "pillow_value",
    "quartic_roots",
    "region_sweep",
    "sample_decomposition",
    "solve_on_pillowcase",
    "special_points",
    "trilaterate",
    "triangle_from_angles",
    "triangle_from_landmarks",
    "triangle_from_sides",
]
