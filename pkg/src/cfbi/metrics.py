"""Scoring a fitted circle against ground truth."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyList
from .geometry import Circle, disk_intersection_area


@dataclass(frozen=True)
class FitReport:
    fitted: Circle
    truth: Circle
    jaccard: float
    ad: float
    rmse: float
    elapsed: float = 0.0


def jaccard(fitted: Circle, truth: Circle) -> float:
    """Intersection over union of the two disks."""
    inter = disk_intersection_area(fitted, truth)
    union = fitted.area + truth.area - inter
    return min(1.0, max(0.0, inter / union))


def _deltas(fitted: Circle, truth: Circle):
    return (fitted.xc - truth.xc, fitted.yc - truth.yc, fitted.r - truth.r)


def avg_distance(fitted: Circle, truth: Circle) -> float:
    """Mean absolute error over (xc, yc, r)."""
    return sum(abs(d) for d in _deltas(fitted, truth)) / 3.0


def rmse(fitted: Circle, truth: Circle) -> float:
    """Root mean square error over (xc, yc, r)."""
    return math.sqrt(sum(d * d for d in _deltas(fitted, truth)) / 3.0)


def score(fitted: Circle, truth: Circle, elapsed: float = 0.0) -> FitReport:
    return FitReport(fitted, truth, jaccard(fitted, truth), avg_distance(fitted, truth),
                     rmse(fitted, truth), elapsed)


@dataclass(frozen=True)
class Summary:
    count: int
    mean: dict
    sd: dict


def aggregate(reports) -> Summary:
    """Mean and sample standard deviation (ddof=1, 0 for a single report) per metric."""
    reports = list(reports)
    if not reports:
        raise EmptyList("cannot aggregate zero reports")
    mean, sd = {}, {}
    for name in ("jaccard", "ad", "rmse", "elapsed"):
        v = np.array([getattr(r, name) for r in reports], dtype=np.float64)
        mean[name] = float(v.mean())
        sd[name] = float(v.std(ddof=1)) if len(v) > 1 else 0.0
    return Summary(len(reports), mean, sd)
