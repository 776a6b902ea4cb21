"""Hot-path kernels: compiled extension when available, pure-Python twin otherwise."""

import warnings

try:
    from ._kernels import (
        azimuth,
        cone_edges,
        cone_index,
        point_in_tri,
        theta_projection_len,
    )

    USING_COMPILED = True
except ImportError:  # pragma: no cover - depends on build environment
    warnings.warn(
        "spannerkit: compiled kernels unavailable, falling back to pure Python",
        RuntimeWarning,
        stacklevel=2,
    )
    from ._kernels_py import (
        azimuth,
        cone_edges,
        cone_index,
        point_in_tri,
        theta_projection_len,
    )

    USING_COMPILED = False

__all__ = [
    "USING_COMPILED",
    "azimuth",
    "cone_edges",
    "cone_index",
    "point_in_tri",
    "theta_projection_len",
]
