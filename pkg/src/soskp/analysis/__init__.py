"""Bound shapes and the smoothed-analysis experiment harness."""

from .bounds import SHAPE_NOTE, BoundShape, bound_shapes, log_of_fraction
from .quadrature import IJReport, IJRow, check_IJ_inequalities
from .smoothed import SmoothedStats, affine_fit_r2, run_smoothed, smoothed_bound_fn

__all__ = [
    "BoundShape",
    "bound_shapes",
    "SHAPE_NOTE",
    "log_of_fraction",
    "smoothed_bound_fn",
    "run_smoothed",
    "SmoothedStats",
    "affine_fit_r2",
    "check_IJ_inequalities",
    "IJReport",
    "IJRow",
]
