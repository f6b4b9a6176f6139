"""Planar circle primitives: three-point circle, residuals and lens areas."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateTriplet

# |D| below this fraction of the squared triplet span counts as collinear.
COLLINEARITY_EPS = 1e-9


@dataclass(frozen=True)
class Point2D:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class Circle:
    """Circle with center ``(xc, yc)`` and radius ``r``."""

    xc: float
    yc: float
    r: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.xc, self.yc, self.r)):
            raise ValueError(f"non-finite circle {self!r}")
        if self.r <= 0:
            raise ValueError(f"radius must be positive, got {self.r}")

    def __iter__(self):
        yield self.xc
        yield self.yc
        yield self.r

    def translated(self, dx: float, dy: float) -> Circle:
        return Circle(self.xc + dx, self.yc + dy, self.r)

    def scaled(self, s: float) -> Circle:
        return Circle(self.xc * s, self.yc * s, self.r * s)

    @property
    def area(self) -> float:
        return math.pi * self.r * self.r


def _xy(p):
    if isinstance(p, Point2D):
        return p.x, p.y
    return float(p[0]), float(p[1])


def circle_from_three_points(p1, p2, p3) -> Circle:
    """Return the unique circle through three points.

    The closed-form determinant solution is evaluated in coordinates relative
    to ``p1``, which keeps the sums of squares small and the result well
    conditioned far from the origin.

    Parameters
    ----------
    p1, p2, p3 : Point2D or (x, y) sequence

    Raises
    ------
    DegenerateTriplet
        If the points are collinear (or coincident) up to a scale-relative
        tolerance ``|D| <= 1e-9 * s**2`` with ``s`` the largest pairwise
        distance.
    """
    x1, y1 = _xy(p1)
    x2, y2 = _xy(p2)
    x3, y3 = _xy(p3)
    ax, ay = x2 - x1, y2 - y1
    bx, by = x3 - x1, y3 - y1
    d = 2.0 * (ax * by - bx * ay)
    span2 = max(ax * ax + ay * ay, bx * bx + by * by,
                (x3 - x2) ** 2 + (y3 - y2) ** 2)
    if not abs(d) > COLLINEARITY_EPS * span2:
        raise DegenerateTriplet(f"collinear triplet {(x1, y1)}, {(x2, y2)}, {(x3, y3)}")
    sa = ax * ax + ay * ay
    sb = bx * bx + by * by
    ux = (sa * by - sb * ay) / d
    uy = (sb * ax - sa * bx) / d
    return Circle(x1 + ux, y1 + uy, math.sqrt(ux * ux + uy * uy))


def signed_residual(c: Circle, p) -> float:
    """Distance from ``p`` to the center minus the radius (negative inside)."""
    x, y = _xy(p)
    return math.hypot(x - c.xc, y - c.yc) - c.r


def disk_intersection_area(a: Circle, b: Circle) -> float:
    """Area of the intersection of two closed disks (exact lens formula)."""
    d = math.hypot(a.xc - b.xc, a.yc - b.yc)
    ra, rb = a.r, b.r
    if d >= ra + rb:
        return 0.0
    if d <= abs(ra - rb):
        rmin = min(ra, rb)
        return math.pi * rmin * rmin
    # clamp guards acos against rounding right at tangency
    ca = max(-1.0, min(1.0, (d * d + ra * ra - rb * rb) / (2.0 * d * ra)))
    cb = max(-1.0, min(1.0, (d * d + rb * rb - ra * ra) / (2.0 * d * rb)))
    alpha = math.acos(ca)
    beta = math.acos(cb)
    area = (ra * ra * (alpha - 0.5 * math.sin(2.0 * alpha))
            + rb * rb * (beta - 0.5 * math.sin(2.0 * beta)))
    return min(max(area, 0.0), math.pi * min(ra, rb) ** 2)
