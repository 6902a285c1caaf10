"""Exact computations around point sets with few distinct distances.

Distance statistics, quadruple censuses, hyperbola incidence families and
sum-product energy inequalities, all in exact rational arithmetic.
"""

__version__ = "0.1.0"

from .exact import (  # noqa: E402
    CanonicalLine,
    Point,
    PointSet,
    canonical_line,
    euclid_sq,
    minkowski_sq,
    rect_dist,
    rotate_scaled,
    scalar,
)

__all__ = [
    "CanonicalLine",
    "Point",
    "PointSet",
    "canonical_line",
    "euclid_sq",
    "minkowski_sq",
    "rect_dist",
    "rotate_scaled",
    "scalar",
]
