"""Cone-based geometric spanners: construction, analysis, and local routing."""

from .analysis import (
    THETA5_LB_FINAL_PATH,
    THETA5_LB_STEP_PATHS,
    THETA5_WITNESS_FACTOR,
    RatioReport,
    bound_value,
    g9_approximation_check,
    gen_circle,
    gen_routing_lb,
    gen_theta5_lower_bound,
    path_length,
    restricted_pair_check,
    shortest_path,
    spanning_ratio,
    theta5_witness_path,
    verify_bound,
)
from .build import (
    CanonicalPathInfo,
    SpannerGraph,
    build_g9,
    build_g12,
    build_half_theta6,
    build_mst,
    build_rotated_union,
    build_theta,
    build_yao,
    canonical_path_info,
    graph_from_json,
    graph_to_json,
)
from .cli_io import gen_random, main, render_svg
from .errors import (
    AlreadyArrived,
    DegenerateInput,
    InternalInvariantViolation,
    InvalidParameter,
    SpannerKitError,
)
from .geometry import (
    CanonicalTriangle,
    ConeSystem,
    Point,
    PointSet,
    angle_alpha,
    canonical_triangle,
    general_position_report,
    points_from_json,
    points_to_json,
    theta_projection,
)
from .kernels import USING_COMPILED
from .routing import (
    ROUTING_FACTORS,
    PotentialValue,
    RoutingStep,
    RoutingTrace,
    classify_case,
    potential,
    route_g9,
    route_g12,
    route_stateful,
    route_stateless,
    trace_from_json,
)

__version__ = "0.1.0"

__all__ = [
    "AlreadyArrived",
    "CanonicalPathInfo",
    "CanonicalTriangle",
    "ConeSystem",
    "DegenerateInput",
    "InternalInvariantViolation",
    "InvalidParameter",
    "Point",
    "PointSet",
    "PotentialValue",
    "ROUTING_FACTORS",
    "RatioReport",
    "RoutingStep",
    "RoutingTrace",
    "SpannerGraph",
    "SpannerKitError",
    "THETA5_LB_FINAL_PATH",
    "THETA5_LB_STEP_PATHS",
    "THETA5_WITNESS_FACTOR",
    "USING_COMPILED",
    "angle_alpha",
    "bound_value",
    "build_g12",
    "build_g9",
    "build_half_theta6",
    "build_mst",
    "build_rotated_union",
    "build_theta",
    "build_yao",
    "canonical_path_info",
    "canonical_triangle",
    "classify_case",
    "g9_approximation_check",
    "gen_circle",
    "gen_random",
    "gen_routing_lb",
    "gen_theta5_lower_bound",
    "general_position_report",
    "graph_from_json",
    "graph_to_json",
    "main",
    "path_length",
    "points_from_json",
    "points_to_json",
    "potential",
    "render_svg",
    "restricted_pair_check",
    "route_g12",
    "route_g9",
    "route_stateful",
    "route_stateless",
    "shortest_path",
    "spanning_ratio",
    "theta5_witness_path",
    "theta_projection",
    "trace_from_json",
    "verify_bound",
]
