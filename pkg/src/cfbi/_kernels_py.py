"""Pure numpy implementations of the hot loops.

Every routine here has a compiled twin in ``_kernels.pyx``. Both evaluate
the same floating-point expressions in the same order so that results are
bit-identical whichever backend is active.
"""

import numpy as np

ACCEPTED = 0
DEGENERATE = 1
OUT_OF_RANGE = 2


def triplet_votes(pts, i, j, k, lo, hi, bin_size, shape, eps):
    """Circle through each index triplet, classified and binned.

    Parameters
    ----------
    pts : (n, 2) float64 array
    i, j, k : (m,) int64 arrays
        Point indices of each triplet.
    lo, hi : (3,) float64
        Half-open range ``[lo, hi)`` of the x, y and r axes.
    bin_size : float
    shape : (3,) int64
        Bin count per axis.
    eps : float
        Collinearity tolerance relative to the squared triplet span.

    Returns
    -------
    status : (m,) int8
        ``ACCEPTED``, ``DEGENERATE`` or ``OUT_OF_RANGE``.
    xc, yc, r : (m,) float64
        Circle parameters (NaN for degenerate triplets).
    idx : (m, 3) int64
        Bin indices, valid only where ``status == ACCEPTED``.
    """
    x1 = pts[i, 0]
    y1 = pts[i, 1]
    ax = pts[j, 0] - x1
    ay = pts[j, 1] - y1
    bx = pts[k, 0] - x1
    by = pts[k, 1] - y1
    d = 2.0 * (ax * by - bx * ay)
    sa = ax * ax + ay * ay
    sb = bx * bx + by * by
    cx = pts[k, 0] - pts[j, 0]
    cy = pts[k, 1] - pts[j, 1]
    sc = cx * cx + cy * cy
    span2 = np.maximum(np.maximum(sa, sb), sc)
    degenerate = ~(np.abs(d) > eps * span2)
    with np.errstate(divide="ignore", invalid="ignore"):
        ux = (sa * by - sb * ay) / d
        uy = (sb * ax - sa * bx) / d
    xc = x1 + ux
    yc = y1 + uy
    r = np.sqrt(ux * ux + uy * uy)
    xc[degenerate] = np.nan
    yc[degenerate] = np.nan
    r[degenerate] = np.nan

    status = np.full(len(d), DEGENERATE, dtype=np.int8)
    idx = np.zeros((len(d), 3), dtype=np.int64)
    ok = ~degenerate
    vals = (xc, yc, r)
    inside = ok.copy()
    for axis in range(3):
        v = vals[axis]
        with np.errstate(invalid="ignore"):
            inside &= (v >= lo[axis]) & (v < hi[axis])
    status[ok] = OUT_OF_RANGE
    status[inside] = ACCEPTED
    for axis in range(3):
        f = np.floor((vals[axis][inside] - lo[axis]) / bin_size)
        idx[inside, axis] = np.minimum(f.astype(np.int64), shape[axis] - 1)
    return status, xc, yc, r, idx


def merge_candidates(xc, yc, r, tol):
    """Sequential candidate list of the randomized Hough transform.

    Each circle is compared with the existing candidates in insertion order;
    the first candidate within ``tol`` on every parameter absorbs it (running
    mean, count + 1), otherwise a new candidate is appended.

    Returns
    -------
    cx, cy, cr : float64 arrays of candidate parameters
    count : int64 array of merged hits per candidate
    """
    n = len(xc)
    cx = np.empty(n)
    cy = np.empty(n)
    cr = np.empty(n)
    count = np.zeros(n, dtype=np.int64)
    m = 0
    for t in range(n):
        x = float(xc[t])
        y = float(yc[t])
        rr = float(r[t])
        hit = -1
        if m:
            match = ((np.abs(cx[:m] - x) <= tol) & (np.abs(cy[:m] - y) <= tol)
                     & (np.abs(cr[:m] - rr) <= tol))
            nz = np.flatnonzero(match)
            if len(nz):
                hit = int(nz[0])
        if hit < 0:
            cx[m] = x
            cy[m] = y
            cr[m] = rr
            count[m] = 1
            m += 1
        else:
            c = count[hit] + 1
            count[hit] = c
            cx[hit] += (x - cx[hit]) / c
            cy[hit] += (y - cy[hit]) / c
            cr[hit] += (rr - cr[hit]) / c
    return cx[:m].copy(), cy[:m].copy(), cr[:m].copy(), count[:m].copy()


def count_inliers(pts, xc, yc, r, tol, chunk=256):
    """Number of points within ``tol`` of each hypothesis circle."""
    h = len(xc)
    out = np.zeros(h, dtype=np.int64)
    px = pts[:, 0]
    py = pts[:, 1]
    for s in range(0, h, chunk):
        e = min(s + chunk, h)
        dx = px[None, :] - xc[s:e, None]
        dy = py[None, :] - yc[s:e, None]
        res = np.abs(np.sqrt(dx * dx + dy * dy) - r[s:e, None])
        out[s:e] = np.count_nonzero(res <= tol, axis=1)
    return out
