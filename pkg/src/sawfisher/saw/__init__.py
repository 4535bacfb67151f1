"""Self-avoiding walk enumeration."""

from .counts import (
    ANY,
    ENDPOINT_SET,
    ORIGINAL_E,
    CountSeries,
    DisplacementSeries,
    Walk,
    WeightedCounts,
    count_from_midedges,
    count_from_vertices,
    displacement_series,
    substitute_series,
    two_point_series,
    two_point_table,
    weighted_black_white,
    weighted_pqr,
)

__all__ = [
    "ANY",
    "ENDPOINT_SET",
    "ORIGINAL_E",
    "CountSeries",
    "DisplacementSeries",
    "Walk",
    "WeightedCounts",
    "count_from_midedges",
    "count_from_vertices",
    "displacement_series",
    "substitute_series",
    "two_point_series",
    "two_point_table",
    "weighted_black_white",
    "weighted_pqr",
]
