"""Multi-degree splines: piecewise polynomials with per-interval degrees.

Builds the B-spline basis of a multi-degree spline space from its transition
functions, provides an integral-recurrence oracle and a fast recurrence path,
and implements knot insertion, local degree elevation, Bezier extraction and
geometric continuity through connection matrices.
"""

from .basis import (
    BSplineBasis,
    OracleLevels,
    UnsupportedSpaceError,
    fast_recurrence_basis,
    fast_recurrence_blendings,
    basis_from_transitions,
    build_basis,
    extract_blending,
    integral_recurrence_oracle,
)
from .bernstein import BernsteinPiece, PiecewisePoly
from .curve import (
    BezierSegment,
    MDCurve,
    OperatorError,
    elevate_degree,
    elevation_data,
    insert_knot,
    insertion_data,
    make_curve,
    to_bezier,
    to_conventional,
)
from .space import (
    ConnectionMatrix,
    ExtendedPartitions,
    InvalidSpaceError,
    SplineSpace,
    extended_partitions,
    validate_space,
)
from .transitions import (
    SingularSystemError,
    TransitionFunction,
    TransitionSet,
    endpoint_orders,
    solve_all,
    solve_transition,
)

__version__ = "0.1.0"

__all__ = [
    "BSplineBasis",
    "BernsteinPiece",
    "BezierSegment",
    "ConnectionMatrix",
    "ExtendedPartitions",
    "InvalidSpaceError",
    "MDCurve",
    "OperatorError",
    "OracleLevels",
    "PiecewisePoly",
    "SingularSystemError",
    "SplineSpace",
    "TransitionFunction",
    "TransitionSet",
    "UnsupportedSpaceError",
    "fast_recurrence_basis",
    "fast_recurrence_blendings",
    "basis_from_transitions",
    "build_basis",
    "elevate_degree",
    "elevation_data",
    "endpoint_orders",
    "extended_partitions",
    "extract_blending",
    "insert_knot",
    "insertion_data",
    "integral_recurrence_oracle",
    "make_curve",
    "solve_all",
    "solve_transition",
    "to_bezier",
    "to_conventional",
    "validate_space",
]
