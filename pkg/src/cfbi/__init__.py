"""Robust circle fitting by combinatorial triplet voting.

Quick start::

    from cfbi import fbi_detect, DetectorConfig
    res = fbi_detect(points, DetectorConfig(rng_seed=1))
    res.circle  # Circle(xc, yc, r)
"""

from .accumulator import Accumulator3D, BinSpec, CellRef, center_of_mass_refine, chebyshev_sum, select_best, top_k
from .detector import DetectorConfig, FbiResult, PointSet, detect, fbi_detect, lsq_fit, rcd_detect, rht_detect
from .errors import (CircleFitError, DegenerateTriplet, EmptyAccumulator, InsufficientPoints,
                     NoAcceptedCandidate, SeparationInfeasible, SingularSystem)
from .geometry import Circle, Point2D, circle_from_three_points, disk_intersection_area, signed_residual
from .kernels import BACKEND
from .metrics import FitReport, aggregate, avg_distance, jaccard, rmse

__version__ = "0.1.0"

__all__ = [
    "Accumulator3D", "BinSpec", "CellRef", "center_of_mass_refine", "chebyshev_sum",
    "select_best", "top_k", "DetectorConfig", "FbiResult", "PointSet", "detect", "fbi_detect",
    "lsq_fit", "rcd_detect", "rht_detect", "CircleFitError", "DegenerateTriplet",
    "EmptyAccumulator", "InsufficientPoints", "NoAcceptedCandidate", "SeparationInfeasible",
    "SingularSystem", "Circle", "Point2D", "circle_from_three_points", "disk_intersection_area",
    "signed_residual", "BACKEND", "FitReport", "aggregate", "avg_distance", "jaccard", "rmse",
]
