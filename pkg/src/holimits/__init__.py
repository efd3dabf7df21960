"""Numerical experiments on pointwise limits of holomorphic, harmonic and
real-analytic functions."""

from .geometry import CompactRegion, Disc, Grid, Rect, Segment, circle_contour, rectangle_contour
from .sequences import EvaluationError, FunctionSequence

__version__ = "0.1.0"

__all__ = ["CompactRegion", "Disc", "Grid", "Rect", "Segment", "circle_contour",
           "rectangle_contour", "EvaluationError", "FunctionSequence", "__version__"]
