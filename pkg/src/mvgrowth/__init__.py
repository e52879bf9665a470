"""Depth-based multivariate growth charts.

Tukey half-space depth quantiles of a subject's measurements against
time-indexed reference populations, the projection direction whose 1-D
quantiles best reproduce them, and SVG charts of both.
"""

__version__ = "0.1.0"

from .data import ReferenceSeries, Trajectory, as_point, as_sample
from .depth import Depth, depth_all, depth_approx, depth_brute, depth_exact_1d, depth_exact_2d
from .direction import (
    DirectionFit,
    UnitDirection,
    objective,
    optimize_grid_2d,
    optimize_sphere,
    project,
    projected_quantile,
)
from .errors import AlignmentError, ConfigError, DimensionError, FormatError, GrowthChartError
from .quantiles import (
    DepthRegion,
    QuantileProfile,
    ReferenceDepths,
    classify_extremes,
    depth_quantile,
    depth_region,
    profile,
    reference_depths,
)
from .synthetic import GenSpec, gen_patient, gen_reference

__all__ = [
    "AlignmentError",
    "ConfigError",
    "Depth",
    "DepthRegion",
    "DimensionError",
    "DirectionFit",
    "FormatError",
    "GenSpec",
    "GrowthChartError",
    "QuantileProfile",
    "ReferenceDepths",
    "ReferenceSeries",
    "Trajectory",
    "UnitDirection",
    "as_point",
    "as_sample",
    "classify_extremes",
    "depth_all",
    "depth_approx",
    "depth_brute",
    "depth_exact_1d",
    "depth_exact_2d",
    "depth_quantile",
    "depth_region",
    "gen_patient",
    "gen_reference",
    "objective",
    "optimize_grid_2d",
    "optimize_sphere",
    "profile",
    "project",
    "projected_quantile",
    "reference_depths",
]
