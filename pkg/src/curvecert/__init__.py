"""Topology certificates for composite Bezier curves via midpoint subdivision.

The package subdivides a curve until its control polygon is provably simple,
homeomorphic, or ambient isotopic to the curve, using closed-form iteration
bounds computed from a handful of geometric constants, and independently
re-verifies every certified property with brute-force oracles.
"""

from .bounds import (
    IterationBounds,
    compute_bounds,
    f_nu,
    iterations_for_homeomorphism,
    iterations_for_isotopy,
    iterations_for_simplicity,
    n1,
    n2,
    n_of_nu,
    n_prime,
)
from .curves import (
    CompositeBezier,
    ControlPolygon,
    CurveDiagnostics,
    SubdivisionResult,
    discrete_derivative,
    evaluate,
    evaluate_derivative,
    hodograph,
    pl_evaluate,
    subdivide,
    subdivide_once,
    validate,
)
from .errors import (
    ConstantsError,
    CurveError,
    DegenerateEdgeError,
    DomainError,
    IterationCapError,
    NotSimpleError,
    ParseError,
    RegularityError,
    RegularityNotReached,
    ValidationError,
)
from .fileio import (
    LoadedCurve,
    load_curve,
    load_polyline,
    parse_report,
    render_report,
    save_curve,
    save_polyline,
    write_mesh,
)
from .metrics import (
    GeometricConstants,
    b_dist,
    b_prime_dist,
    distance_to_hull,
    exterior_angle,
    geometric_constants,
    max_first_difference,
    min_derivative_norm,
    n_infinity,
    second_difference_norm,
    total_curvature,
)
from .pipe import (
    PipeEstimate,
    estimate_pipe_radius,
    frames,
    pipe_contains,
    pipe_surface_mesh,
)
from .verify import (
    CheckResult,
    TopologyCertificate,
    certify,
    is_simple_polyline,
    max_derivative_angle,
    measure_max_exterior_angle,
    parameterwise_distance,
    piece_total_curvatures,
)

__version__ = "0.1.0"

__all__ = [
    "CompositeBezier", "ControlPolygon", "SubdivisionResult", "CurveDiagnostics",
    "GeometricConstants", "IterationBounds", "PipeEstimate",
    "TopologyCertificate", "CheckResult", "LoadedCurve",
    "evaluate", "evaluate_derivative", "pl_evaluate",
    "subdivide", "subdivide_once", "hodograph", "discrete_derivative", "validate",
    "exterior_angle", "total_curvature", "second_difference_norm", "n_infinity",
    "max_first_difference", "min_derivative_norm", "distance_to_hull",
    "b_dist", "b_prime_dist", "geometric_constants",
    "n1", "f_nu", "n_of_nu", "n_prime", "n2", "compute_bounds",
    "iterations_for_simplicity", "iterations_for_homeomorphism", "iterations_for_isotopy",
    "frames", "estimate_pipe_radius", "pipe_contains", "pipe_surface_mesh",
    "is_simple_polyline", "parameterwise_distance", "max_derivative_angle",
    "measure_max_exterior_angle", "piece_total_curvatures", "certify",
    "load_curve", "save_curve", "load_polyline", "save_polyline", "write_mesh",
    "render_report", "parse_report",
    "CurveError", "DomainError", "DegenerateEdgeError", "IterationCapError",
    "RegularityError", "NotSimpleError", "ConstantsError", "RegularityNotReached",
    "ParseError", "ValidationError",
]
