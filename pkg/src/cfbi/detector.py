"""Circle detectors operating on point/edgel coordinates.

``fbi_detect`` is the combinatorial triplet-voting detector: random index
triplets are turned into circles, binned into an (x, y, r) accumulator, the
most voted cells are smoothed with a Chebyshev box and the winner is refined
by a vote-weighted center of mass. ``rht_detect`` and ``rcd_detect`` are the
classic randomized baselines and ``lsq_fit`` the algebraic (Kasa) fit used as
an independent oracle.

All randomness comes from ``numpy.random.Generator(PCG64(seed))``; a fixed seed
gives bit-identical output on every platform numpy supports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .accumulator import (Accumulator3D, BinSpec, CellRef, center_of_mass_refine, select_best,
                          smooth, top_k)
from .errors import (EmptyAccumulator, InsufficientPoints, NoAcceptedCandidate,
                     SingularSystem)
from .geometry import COLLINEARITY_EPS, Circle


@dataclass
class PointSet:
    """Planar coordinates, in pixels (``"px"``) or millimetres (``"mm"``)."""

    points: np.ndarray
    unit: str = "mm"

    def __post_init__(self):
        pts = np.asarray([tuple(p) for p in self.points] if not isinstance(self.points, np.ndarray)
                         else self.points, dtype=np.float64)
        if pts.size == 0:
            pts = pts.reshape(0, 2)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"expected (n, 2) coordinates, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("coordinates must be finite")
        if self.unit not in ("px", "mm"):
            raise ValueError(f"unit must be 'px' or 'mm', got {self.unit!r}")
        self.points = np.ascontiguousarray(pts)

    def __len__(self):
        return len(self.points)


@dataclass
class DetectorConfig:
    n_triplets: int = 5000
    top_n: int = 5
    kernel_radius: int = 1
    bin_spec: BinSpec | None = None
    bin_size: float = 1.0
    rng_seed: int = 0
    max_resample_factor: float = 3.0
    # randomized Hough transform
    merge_tol: float | None = None
    evidence_threshold: int = 5
    # random circle detection
    inlier_tol: float | None = None
    accept_ratio: float = 0.6

    def __post_init__(self):
        if self.n_triplets < 1:
            raise ValueError("n_triplets must be >= 1")
        if self.top_n < 1:
            raise ValueError("top_n must be >= 1")
        if self.kernel_radius < 0:
            raise ValueError("kernel_radius must be >= 0")
        if self.max_resample_factor < 1:
            raise ValueError("max_resample_factor must be >= 1")

    def spec_for(self, pts: PointSet) -> BinSpec:
        if self.bin_spec is not None:
            return self.bin_spec
        return BinSpec.for_points(pts.points, self.bin_size)


@dataclass
class FbiResult:
    circle: Circle
    votes_accepted: int
    rejected: int
    degenerate_count: int
    draws: int
    candidates: list[CellRef] = field(default_factory=list)
    best: CellRef | None = None
    accumulator: Accumulator3D | None = field(default=None, repr=False)


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def sample_triplets(rng: np.random.Generator, n: int, m: int):
    """``m`` ordered triplets of pairwise distinct indices, uniform over ``range(n)``."""
    i = rng.integers(0, n, m)
    j = rng.integers(0, n - 1, m)
    j += j >= i
    k = rng.integers(0, n - 2, m)
    a = np.minimum(i, j)
    b = np.maximum(i, j)
    k += k >= a
    k += k >= b
    return i.astype(np.int64), j.astype(np.int64), k.astype(np.int64)


def _as_pointset(pts) -> PointSet:
    return pts if isinstance(pts, PointSet) else PointSet(pts)


def _check(pts: PointSet):
    if len(pts) < 3:
        raise InsufficientPoints(f"need at least 3 points, got {len(pts)}")


def fbi_detect(pts, cfg: DetectorConfig | None = None) -> FbiResult:
    """Combinatorial triplet voting with Chebyshev smoothing and center-of-mass refinement.

    Triplets that are degenerate or fall outside the bin spec are replaced by
    fresh draws until ``n_triplets`` votes are cast or
    ``max_resample_factor * n_triplets`` triplets have been drawn.

    Raises
    ------
    InsufficientPoints
        Fewer than 3 points.
    EmptyAccumulator
        Not a single triplet produced an in-range circle.
    """
    cfg = cfg or DetectorConfig()
    pts = _as_pointset(pts)
    _check(pts)
    spec = cfg.spec_for(pts)
    acc = Accumulator3D(spec)
    rng = make_rng(cfg.rng_seed)
    lo, hi = spec.lo, spec.hi
    shape = np.array(spec.shape, dtype=np.int64)
    budget = max(cfg.n_triplets, int(math.ceil(cfg.max_resample_factor * cfg.n_triplets)))
    n = len(pts)
    draws = degenerate = rejected = 0
    while acc.accepted < cfg.n_triplets and draws < budget:
        m = min(cfg.n_triplets - acc.accepted, budget - draws)
        i, j, k = sample_triplets(rng, n, m)
        status, _, _, _, idx = kernels.triplet_votes(pts.points, i, j, k, lo, hi,
                                                     spec.bin_size, shape, COLLINEARITY_EPS)
        acc.add_indices(idx[status == kernels.ACCEPTED])
        degenerate += int(np.count_nonzero(status == kernels.DEGENERATE))
        rejected += int(np.count_nonzero(status == kernels.OUT_OF_RANGE))
        draws += m
    acc.rejected = rejected
    if acc.accepted == 0:
        raise EmptyAccumulator("no triplet produced an in-range circle")
    cands = smooth(acc, top_k(acc, cfg.top_n), cfg.kernel_radius)
    best = select_best(cands)
    circle = center_of_mass_refine(acc, best)
    return FbiResult(circle, acc.accepted, rejected, degenerate, draws, cands, best, acc)


def _triplet_circles(pts: PointSet, cfg: DetectorConfig, rng, in_range: bool):
    spec = cfg.spec_for(pts)
    i, j, k = sample_triplets(rng, len(pts), cfg.n_triplets)
    status, xc, yc, r, _ = kernels.triplet_votes(
        pts.points, i, j, k, spec.lo, spec.hi, spec.bin_size,
        np.array(spec.shape, dtype=np.int64), COLLINEARITY_EPS)
    keep = status == kernels.ACCEPTED if in_range else status != kernels.DEGENERATE
    return xc[keep], yc[keep], r[keep], spec


def rht_detect(pts, cfg: DetectorConfig | None = None) -> Circle:
    """Randomized Hough transform with a dynamic candidate list.

    ``n_triplets`` random triplets are converted to circles; each circle is
    merged into the first stored candidate within ``merge_tol`` on every
    parameter (running mean of merged circles) or starts a new candidate.
    The candidate with the most merged hits wins, provided it reached
    ``evidence_threshold`` hits; ties go to the smaller radius, then to the
    earlier candidate.
    """
    cfg = cfg or DetectorConfig()
    pts = _as_pointset(pts)
    _check(pts)
    xc, yc, r, spec = _triplet_circles(pts, cfg, make_rng(cfg.rng_seed), in_range=True)
    tol = spec.bin_size if cfg.merge_tol is None else cfg.merge_tol
    cx, cy, cr, count = kernels.merge_candidates(np.ascontiguousarray(xc),
                                                 np.ascontiguousarray(yc),
                                                 np.ascontiguousarray(r), tol)
    ok = np.flatnonzero(count >= cfg.evidence_threshold)
    if not len(ok):
        raise NoAcceptedCandidate("no candidate reached the evidence threshold")
    best = min(ok.tolist(), key=lambda c: (-count[c], cr[c], c))
    return Circle(float(cx[best]), float(cy[best]), float(cr[best]))


def rcd_detect(pts, cfg: DetectorConfig | None = None) -> Circle:
    """Random circle detection: triplet hypotheses validated by inlier counting.

    Every non-degenerate hypothesis is scored by the number of points within
    ``inlier_tol`` of it (all hypotheses are scored, no fourth-point
    pre-filter). The best-scoring hypothesis is returned if its inliers make
    up at least ``accept_ratio`` of the points.
    """
    cfg = cfg or DetectorConfig()
    pts = _as_pointset(pts)
    _check(pts)
    xc, yc, r, spec = _triplet_circles(pts, cfg, make_rng(cfg.rng_seed), in_range=False)
    if not len(xc):
        raise NoAcceptedCandidate("every sampled triplet was degenerate")
    tol = spec.bin_size if cfg.inlier_tol is None else cfg.inlier_tol
    inliers = kernels.count_inliers(pts.points, np.ascontiguousarray(xc),
                                    np.ascontiguousarray(yc), np.ascontiguousarray(r), tol)
    best = int(np.argmax(inliers))
    if inliers[best] < cfg.accept_ratio * len(pts):
        raise NoAcceptedCandidate(
            f"best hypothesis has {int(inliers[best])}/{len(pts)} inliers")
    return Circle(float(xc[best]), float(yc[best]), float(r[best]))


def lsq_fit(pts) -> Circle:
    """Algebraic least-squares circle (Kasa).

    Solves ``x**2 + y**2 = a*x + b*y + c`` in centred, rescaled coordinates.
    Exact on noise-free samples.
    """
    pts = _as_pointset(pts)
    _check(pts)
    p = pts.points
    mean = p.mean(axis=0)
    q = p - mean
    scale = math.sqrt(float(np.mean(np.sum(q * q, axis=1))))
    if scale == 0.0:
        raise SingularSystem("all points coincide")
    q = q / scale
    A = np.column_stack([q, np.ones(len(q))])
    rhs = np.sum(q * q, axis=1)
    sol, _, rank, sv = np.linalg.lstsq(A, rhs, rcond=None)
    if rank < 3 or sv[-1] < 1e-9 * sv[0]:
        raise SingularSystem("points are collinear")
    a, b, c = sol
    r2 = c + 0.25 * (a * a + b * b)
    if not r2 > 0:
        raise SingularSystem("no real circle fits the points")
    return Circle(float(mean[0] + 0.5 * a * scale), float(mean[1] + 0.5 * b * scale),
                  float(math.sqrt(r2) * scale))


def _fbi_circle(pts, cfg):
    return fbi_detect(pts, cfg).circle


DETECTORS = {
    "fbi": _fbi_circle,
    "rht": rht_detect,
    "rcd": rcd_detect,
    "lsq": lambda pts, cfg=None: lsq_fit(pts),
}


def detect(name: str, pts, cfg: DetectorConfig | None = None) -> Circle:
    """Run detector ``name`` (one of ``DETECTORS``) and return its circle."""
    try:
        fn = DETECTORS[name]
    except KeyError:
        raise ValueError(f"unknown detector {name!r}; choose from {sorted(DETECTORS)}") from None
    return fn(pts, cfg)
