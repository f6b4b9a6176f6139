"""Discretized (x, y, r) vote space.

Cells are half-open: a value ``v`` on an axis with lower bound ``lo`` lands in
bin ``floor((v - lo) / bin_size)`` and values at or beyond the upper bound are
rejected. Ties are broken everywhere by ascending ``(ir, ix, iy)``, i.e. the
smaller radius wins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import EmptyAccumulator
from .geometry import Circle

# Above this many cells the accumulator switches to a sparse map.
DENSE_LIMIT = 2 ** 24


@dataclass(frozen=True)
class BinSpec:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    r_min: float
    r_max: float
    bin_size: float = 1.0

    def __post_init__(self):
        if not self.bin_size > 0:
            raise ValueError("bin_size must be positive")
        if not self.r_min > 0:
            raise ValueError("r_min must be positive")
        for name, lo, hi in (("x", self.x_min, self.x_max), ("y", self.y_min, self.y_max),
                             ("r", self.r_min, self.r_max)):
            if not hi > lo:
                raise ValueError(f"{name}_max must exceed {name}_min")
            if math.ceil((hi - lo) / self.bin_size) < 3:
                raise ValueError(f"{name} axis needs at least 3 bins")

    @property
    def shape(self) -> tuple[int, int, int]:
        b = self.bin_size
        return (math.ceil((self.x_max - self.x_min) / b),
                math.ceil((self.y_max - self.y_min) / b),
                math.ceil((self.r_max - self.r_min) / b))

    @property
    def lo(self) -> np.ndarray:
        return np.array([self.x_min, self.y_min, self.r_min], dtype=np.float64)

    @property
    def hi(self) -> np.ndarray:
        return np.array([self.x_max, self.y_max, self.r_max], dtype=np.float64)

    @property
    def n_cells(self) -> int:
        nx, ny, nr = self.shape
        return nx * ny * nr

    def index_of(self, xc: float, yc: float, r: float):
        """Bin indices of a parameter triple, or None when out of range."""
        shape = self.shape
        out = []
        for v, lo, hi, n in ((xc, self.x_min, self.x_max, shape[0]),
                             (yc, self.y_min, self.y_max, shape[1]),
                             (r, self.r_min, self.r_max, shape[2])):
            if not (lo <= v < hi):
                return None
            out.append(min(int(math.floor((v - lo) / self.bin_size)), n - 1))
        return tuple(out)

    def bin_center(self, ix, iy, ir):
        b = self.bin_size
        return (self.x_min + (ix + 0.5) * b, self.y_min + (iy + 0.5) * b,
                self.r_min + (ir + 0.5) * b)

    @classmethod
    def for_image(cls, width: int, height: int, bin_size: float = 1.0) -> BinSpec:
        """Centers anywhere in the image, radius from 3 px to half the short side."""
        return cls(0.0, float(width), 0.0, float(height), 3.0,
                   float(math.ceil(min(width, height) / 2)), bin_size)

    @classmethod
    def for_points(cls, pts, bin_size: float = 1.0) -> BinSpec:
        """Bounding box grown by 50 % (snapped outward to the bin grid); r up to its diagonal."""
        pts = np.asarray(pts, dtype=np.float64)
        lo = pts.min(axis=0)
        hi = pts.max(axis=0)
        ext = np.maximum(hi - lo, 3 * bin_size)
        mid = (lo + hi) / 2
        a = np.floor((mid - 0.75 * ext) / bin_size) * bin_size
        b = np.ceil((mid + 0.75 * ext) / bin_size) * bin_size
        diag = math.hypot(*(hi - lo))
        r_max = max(math.ceil(diag / bin_size), 4) * bin_size
        return cls(float(a[0]), float(b[0]), float(a[1]), float(b[1]),
                   float(bin_size), float(r_max), bin_size)


@dataclass(frozen=True)
class CellRef:
    ix: int
    iy: int
    ir: int
    raw_votes: int
    smoothed_votes: int | None = None

    @property
    def index(self):
        return (self.ix, self.iy, self.ir)


class Accumulator3D:
    """Vote counts over a :class:`BinSpec`, dense or sparse depending on size.

    ``accepted`` and ``rejected`` count the circles passed to :meth:`vote` /
    :meth:`add_indices`; the array total always equals ``accepted``.
    """

    def __init__(self, spec: BinSpec, dense: bool | None = None):
        self.spec = spec
        self.shape = spec.shape
        self.dense = spec.n_cells <= DENSE_LIMIT if dense is None else dense
        if self.dense:
            self._grid = np.zeros(self.shape, dtype=np.int32)
            self._touched = []
        else:
            self._map = {}
        self.accepted = 0
        self.rejected = 0
        self._nz = None

    def _linear(self, idx):
        nx, ny, nr = self.shape
        idx = np.asarray(idx, dtype=np.int64).reshape(-1, 3)
        return (idx[:, 0] * ny + idx[:, 1]) * nr + idx[:, 2]

    def _unravel(self, lin):
        return np.stack(np.unravel_index(lin, self.shape), axis=1).astype(np.int64)

    def add_indices(self, idx):
        """Add one vote per row of pre-binned ``(ix, iy, ir)`` indices."""
        lin = self._linear(idx)
        if not len(lin):
            return
        if self.dense:
            np.add.at(self._grid.reshape(-1), lin, 1)
            self._touched.append(lin)
        else:
            keys, counts = np.unique(lin, return_counts=True)
            m = self._map
            for key, c in zip(keys.tolist(), counts.tolist()):
                m[key] = m.get(key, 0) + c
        self.accepted += len(lin)
        self._nz = None

    def vote(self, c: Circle) -> bool:
        """Vote for ``c``; False (and no change) when it lies outside the spec."""
        idx = self.spec.index_of(c.xc, c.yc, c.r)
        if idx is None:
            self.rejected += 1
            return False
        self.add_indices([idx])
        return True

    def count(self, ix, iy, ir) -> int:
        if self.dense:
            return int(self._grid[ix, iy, ir])
        return self._map.get(int(self._linear([(ix, iy, ir)])[0]), 0)

    def total(self) -> int:
        if self.dense:
            return int(self._grid.sum(dtype=np.int64))
        return sum(self._map.values())

    def nonzero(self):
        """Indices ``(k, 3)`` and counts ``(k,)`` of all cells holding votes."""
        if self._nz is None:
            if self.dense:
                if self._touched:
                    lin = np.unique(np.concatenate(self._touched))
                    counts = self._grid.reshape(-1)[lin].astype(np.int64)
                else:
                    lin = np.zeros(0, dtype=np.int64)
                    counts = np.zeros(0, dtype=np.int64)
            else:
                lin = np.fromiter(self._map.keys(), dtype=np.int64, count=len(self._map))
                counts = np.fromiter(self._map.values(), dtype=np.int64, count=len(self._map))
            self._nz = (self._unravel(lin), counts)
        return self._nz

    def to_dense(self) -> np.ndarray:
        if self.dense:
            return self._grid.astype(np.int64)
        out = np.zeros(self.shape, dtype=np.int64)
        idx, counts = self.nonzero()
        out[idx[:, 0], idx[:, 1], idx[:, 2]] = counts
        return out


def top_k(acc: Accumulator3D, k: int) -> list[CellRef]:
    """The ``k`` cells with most raw votes, descending, ties by (ir, ix, iy)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    idx, counts = acc.nonzero()
    if not len(counts):
        raise EmptyAccumulator("accumulator holds no votes")
    order = np.lexsort((idx[:, 1], idx[:, 0], idx[:, 2], -counts))[:k]
    return [CellRef(int(idx[o, 0]), int(idx[o, 1]), int(idx[o, 2]), int(counts[o]))
            for o in order]


def chebyshev_sum(acc: Accumulator3D, cell, radius: int = 1) -> int:
    """Sum of raw votes in the (2*radius+1)^3 box around ``cell``, clipped at borders."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    ix, iy, ir = cell.index if isinstance(cell, CellRef) else cell
    if acc.dense:
        g = acc._grid
        return int(g[max(ix - radius, 0):ix + radius + 1,
                     max(iy - radius, 0):iy + radius + 1,
                     max(ir - radius, 0):ir + radius + 1].sum(dtype=np.int64))
    idx, counts = acc.nonzero()
    near = np.all(np.abs(idx - np.array([ix, iy, ir])) <= radius, axis=1)
    return int(counts[near].sum())


def smooth(acc: Accumulator3D, cells, radius: int = 1) -> list[CellRef]:
    """Attach the Chebyshev-box vote sum to each candidate cell."""
    return [replace(c, smoothed_votes=chebyshev_sum(acc, c, radius)) for c in cells]


def select_best(candidates) -> CellRef:
    """Candidate with the largest smoothed vote count; ties by (ir, ix, iy)."""
    if not candidates:
        raise ValueError("no candidates")
    return min(candidates, key=lambda c: (-c.smoothed_votes, c.ir, c.ix, c.iy))


def neighborhood(acc: Accumulator3D, cell, radius: int = 1):
    """Indices ``(k, 3)`` and raw counts of the clipped box around ``cell``."""
    ix, iy, ir = cell.index if isinstance(cell, CellRef) else cell
    nx, ny, nr = acc.shape
    if acc.dense:
        xs = slice(max(ix - radius, 0), min(ix + radius + 1, nx))
        ys = slice(max(iy - radius, 0), min(iy + radius + 1, ny))
        rs = slice(max(ir - radius, 0), min(ir + radius + 1, nr))
        block = acc._grid[xs, ys, rs].astype(np.int64)
        gx, gy, gr = np.meshgrid(np.arange(xs.start, xs.stop), np.arange(ys.start, ys.stop),
                                 np.arange(rs.start, rs.stop), indexing="ij")
        idx = np.stack([gx.ravel(), gy.ravel(), gr.ravel()], axis=1)
        return idx, block.ravel()
    idx, counts = acc.nonzero()
    near = np.all(np.abs(idx - np.array([ix, iy, ir])) <= radius, axis=1)
    return idx[near], counts[near]


def center_of_mass_refine(acc: Accumulator3D, cell, radius: int = 1) -> Circle:
    """Vote-weighted mean of bin centers over the 27-cell neighbourhood of ``cell``.

    Weights are raw counts. With no votes in the neighbourhood the bin center
    of ``cell`` itself is returned.
    """
    spec = acc.spec
    ix, iy, ir = cell.index if isinstance(cell, CellRef) else cell
    idx, w = neighborhood(acc, (ix, iy, ir), radius)
    total = w.sum()
    if total == 0:
        return Circle(*spec.bin_center(ix, iy, ir))
    offs = (w[:, None] * (idx + 0.5)).sum(axis=0) / total
    b = spec.bin_size
    return Circle(float(spec.x_min + offs[0] * b), float(spec.y_min + offs[1] * b),
                  float(spec.r_min + offs[2] * b))
