"""Synthetic circle datasets with radial noise, outliers and grid quantization.

Two recipes are provided:

* :func:`gen_b1` -- 50 noisy points on the upper half of circle (50, 60, 100) mm,
  a few of them pushed radially off the arc by 5-10 sigma.
* :func:`gen_b2` -- 100 noisy points on the full circle (120, 120, 120) mm, a
  proportion replaced by uniform clutter in the 480 mm square around the
  center, optionally snapped to a grid of ``q`` mm cells.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import SeparationInfeasible
from .geometry import Circle

MAX_OUTLIER_ATTEMPTS = 100_000

B2_NOISE_PCTS = (0, 1, 2, 5, 10)
B2_OUTLIER_PCTS = (0, 10, 20, 30, 40, 50, 60, 70)
# coarser alternative contamination grid, selectable through the sweep grid
B2_OUTLIER_PCTS_ALT = (0, 10, 20, 50, 75)
B2_QS = (0, 1, 2, 3, 6, 12, 24, 40)
B1_OUTLIER_COUNTS = (0, 1, 2, 3, 4, 5)


def resolution_label(q: int) -> str:
    """Grid size for quantization step ``q`` ("inf" for the continuous domain)."""
    return "inf" if q == 0 else f"{480 // q}x{480 // q}"


@dataclass(frozen=True)
class B1Spec:
    center: tuple = (50.0, 60.0)
    radius: float = 100.0
    n_points: int = 50
    sigma: float = 1.0
    n_outliers: int = 0
    outlier_sigmas: tuple = (5.0, 10.0)
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.n_outliers <= self.n_points:
            raise ValueError("n_outliers must lie in [0, n_points]")
        if self.sigma < 0 or self.radius <= 0:
            raise ValueError("sigma must be >= 0 and radius > 0")

    @property
    def truth(self) -> Circle:
        return Circle(float(self.center[0]), float(self.center[1]), float(self.radius))


@dataclass(frozen=True)
class B2Spec:
    center: tuple = (120.0, 120.0)
    radius: float = 120.0
    n_points: int = 100
    noise_pct: float = 0.0
    outlier_pct: float = 0.0
    q: int = 0
    seed: int = 0
    separation_floor: float = 0.01

    def __post_init__(self):
        if self.noise_pct < 0:
            raise ValueError("noise_pct must be >= 0")
        if not 0 <= self.outlier_pct <= 100:
            raise ValueError("outlier_pct must lie in [0, 100]")
        if self.q < 0 or int(self.q) != self.q:
            raise ValueError("q must be a non-negative integer")

    @property
    def sigma(self) -> float:
        return self.noise_pct / 100.0 * self.radius

    @property
    def n_outliers(self) -> int:
        return int(round(self.outlier_pct * self.n_points / 100.0))

    @property
    def separation(self) -> float:
        """Minimum outlier distance from the circle; 3 sigma with a floor for sigma = 0."""
        return max(3.0 * self.sigma, self.separation_floor * self.radius)

    @property
    def truth(self) -> Circle:
        return Circle(float(self.center[0]), float(self.center[1]), float(self.radius))


@dataclass
class LabeledDataset:
    """Points with inlier flags.

    ``survivors`` holds the number of distinct inlier and outlier positions,
    each class counted on its own; after quantization a cell hit by both
    classes counts once in each.
    """

    points: np.ndarray
    inlier: np.ndarray
    truth: Circle
    effective_truth: Circle
    meta: dict = field(default_factory=dict)
    survivors: tuple = (0, 0)

    @property
    def labels(self) -> list[str]:
        return ["in" if f else "out" for f in self.inlier]

    @property
    def n_inliers(self) -> int:
        return int(np.count_nonzero(self.inlier))

    @property
    def n_outliers(self) -> int:
        return int(len(self.inlier) - self.n_inliers)


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def _meta(spec) -> dict:
    d = asdict(spec)
    d["recipe"] = type(spec).__name__
    return d


def gen_b1(spec: B1Spec, rng=None) -> LabeledDataset:
    rng = _rng(spec.seed if rng is None else rng)
    n = spec.n_points
    theta = rng.uniform(0.0, math.pi, n)
    radii = spec.radius + rng.normal(0.0, spec.sigma, n) if spec.sigma > 0 else np.full(n, spec.radius)
    out = rng.choice(n, spec.n_outliers, replace=False)
    lo, hi = spec.outlier_sigmas
    sign = rng.choice(np.array([-1.0, 1.0]), len(out))
    radii[out] = spec.radius + sign * rng.uniform(lo * spec.sigma, hi * spec.sigma, len(out))
    pts = np.column_stack([spec.center[0] + radii * np.cos(theta),
                           spec.center[1] + radii * np.sin(theta)])
    inlier = np.ones(n, dtype=bool)
    inlier[out] = False
    truth = spec.truth
    return LabeledDataset(pts, inlier, truth, truth, _meta(spec),
                          (int(inlier.sum()), int(n - inlier.sum())))


def _outliers(rng, spec: B2Spec, count: int) -> np.ndarray:
    cx, cy = spec.center
    half = 2.0 * spec.radius
    sep = spec.separation
    got = np.empty((count, 2))
    filled = 0
    attempts = 0
    batch = max(64, 4 * count)
    while filled < count:
        if attempts >= MAX_OUTLIER_ATTEMPTS * count:
            raise SeparationInfeasible(
                f"could not place {count} outliers {sep} away from the circle")
        cand = rng.uniform((cx - half, cy - half), (cx + half, cy + half), (batch, 2))
        attempts += batch
        resid = np.abs(np.hypot(cand[:, 0] - cx, cand[:, 1] - cy) - spec.radius)
        ok = cand[resid > sep]
        take = min(len(ok), count - filled)
        got[filled:filled + take] = ok[:take]
        filled += take
    return got


def gen_b2(spec: B2Spec, rng=None) -> LabeledDataset:
    rng = _rng(spec.seed if rng is None else rng)
    n = spec.n_points
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    radii = spec.radius + rng.normal(0.0, spec.sigma, n) if spec.sigma > 0 else np.full(n, spec.radius)
    pts = np.column_stack([spec.center[0] + radii * np.cos(theta),
                           spec.center[1] + radii * np.sin(theta)])
    out = rng.choice(n, spec.n_outliers, replace=False)
    pts[out] = _outliers(rng, spec, len(out))
    inlier = np.ones(n, dtype=bool)
    inlier[out] = False
    truth = spec.truth
    meta = _meta(spec)
    if spec.q == 0:
        return LabeledDataset(pts, inlier, truth, truth, meta,
                              (int(inlier.sum()), int(n - inlier.sum())))
    qpts, qin, eff = quantize(pts, truth, spec.q, inlier)
    grid = round_half_away(pts / spec.q)
    survivors = (_n_distinct(grid[inlier]), _n_distinct(grid[~inlier]))
    return LabeledDataset(qpts, qin, truth, eff, meta, survivors)


def round_half_away(a):
    """Round to nearest integer, halves away from zero."""
    a = np.asarray(a, dtype=np.float64)
    return np.sign(a) * np.floor(np.abs(a) + 0.5)


def _n_distinct(grid) -> int:
    return int(len(np.unique(grid, axis=0))) if len(grid) else 0


def quantize(points, truth: Circle, q: int, inlier=None):
    """Snap points to a grid of ``q``-unit cells and collapse duplicates.

    Returns
    -------
    points : (k, 2) array
        Distinct grid coordinates ``round(p / q)``, lexicographically sorted.
    inlier : (k,) bool array or None
        A merged point is an inlier when any of its pre-images was.
    effective_truth : Circle
        ``truth`` expressed in grid units (exact division, no rounding).
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    grid = round_half_away(np.asarray(points, dtype=np.float64) / q)
    uniq, inverse = np.unique(grid, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    merged = None
    if inlier is not None:
        merged = np.zeros(len(uniq), dtype=bool)
        np.logical_or.at(merged, inverse, np.asarray(inlier, dtype=bool))
    return uniq, merged, truth.scaled(1.0 / q)


def write_csv(ds: LabeledDataset, path) -> Path:
    """Write ``x,y,label`` rows plus a JSON sidecar (same stem, ``.json``)."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y", "label"])
        for (x, y), lab in zip(ds.points.tolist(), ds.labels):
            w.writerow([repr(float(x)), repr(float(y)), lab])
    side = path.with_suffix(".json")
    meta = dict(ds.meta)
    meta["truth"] = list(ds.truth)
    meta["effective_truth"] = list(ds.effective_truth)
    meta["survivors"] = {"in": ds.survivors[0], "out": ds.survivors[1]}
    side.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return side


def read_points_csv(path):
    """Read a point CSV (header ``x,y`` with optional ``label``); returns (points, inlier or None)."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if rows and not {"x", "y"} <= set(rows[0]):
        raise ValueError(f"{path}: expected columns x,y")
    pts = np.array([(float(r["x"]), float(r["y"])) for r in rows], dtype=np.float64).reshape(-1, 2)
    if rows and "label" in rows[0]:
        return pts, np.array([r["label"] == "in" for r in rows], dtype=bool)
    return pts, None
