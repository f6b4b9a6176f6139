# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Mirrors ``_kernels_py`` expression for expression."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, floor, fabs, NAN

cnp.import_array()

cdef enum:
    C_ACCEPTED = 0
    C_DEGENERATE = 1
    C_OUT_OF_RANGE = 2

ACCEPTED = C_ACCEPTED
DEGENERATE = C_DEGENERATE
OUT_OF_RANGE = C_OUT_OF_RANGE


def triplet_votes(const double[:, ::1] pts, const cnp.int64_t[::1] i,
                  const cnp.int64_t[::1] j, const cnp.int64_t[::1] k,
                  const double[::1] lo, const double[::1] hi, double bin_size,
                  const cnp.int64_t[::1] shape, double eps):
    cdef Py_ssize_t m = i.shape[0], t
    status_a = np.empty(m, dtype=np.int8)
    xc_a = np.empty(m, dtype=np.float64)
    yc_a = np.empty(m, dtype=np.float64)
    r_a = np.empty(m, dtype=np.float64)
    idx_a = np.zeros((m, 3), dtype=np.int64)
    cdef cnp.int8_t[::1] status = status_a
    cdef double[::1] xc = xc_a, yc = yc_a, r = r_a
    cdef cnp.int64_t[:, ::1] idx = idx_a
    cdef double x1, y1, ax, ay, bx, by, cx, cy, d, sa, sb, sc, span2, ux, uy
    cdef double v[3]
    cdef cnp.int64_t b
    cdef int axis
    cdef bint inside
    with nogil:
        for t in range(m):
            x1 = pts[i[t], 0]
            y1 = pts[i[t], 1]
            ax = pts[j[t], 0] - x1
            ay = pts[j[t], 1] - y1
            bx = pts[k[t], 0] - x1
            by = pts[k[t], 1] - y1
            d = 2.0 * (ax * by - bx * ay)
            sa = ax * ax + ay * ay
            sb = bx * bx + by * by
            cx = pts[k[t], 0] - pts[j[t], 0]
            cy = pts[k[t], 1] - pts[j[t], 1]
            sc = cx * cx + cy * cy
            span2 = sa if sa > sb else sb
            if sc > span2:
                span2 = sc
            if not (fabs(d) > eps * span2):
                status[t] = C_DEGENERATE
                xc[t] = NAN
                yc[t] = NAN
                r[t] = NAN
                continue
            ux = (sa * by - sb * ay) / d
            uy = (sb * ax - sa * bx) / d
            v[0] = x1 + ux
            v[1] = y1 + uy
            v[2] = sqrt(ux * ux + uy * uy)
            xc[t] = v[0]
            yc[t] = v[1]
            r[t] = v[2]
            inside = True
            for axis in range(3):
                if not (v[axis] >= lo[axis] and v[axis] < hi[axis]):
                    inside = False
                    break
            if not inside:
                status[t] = C_OUT_OF_RANGE
                continue
            status[t] = C_ACCEPTED
            for axis in range(3):
                b = <cnp.int64_t>floor((v[axis] - lo[axis]) / bin_size)
                if b > shape[axis] - 1:
                    b = shape[axis] - 1
                idx[t, axis] = b
    return status_a, xc_a, yc_a, r_a, idx_a


def merge_candidates(const double[::1] xc, const double[::1] yc,
                     const double[::1] r, double tol):
    cdef Py_ssize_t n = xc.shape[0], t, c, m = 0, hit
    cx_a = np.empty(n, dtype=np.float64)
    cy_a = np.empty(n, dtype=np.float64)
    cr_a = np.empty(n, dtype=np.float64)
    count_a = np.zeros(n, dtype=np.int64)
    cdef double[::1] cx = cx_a, cy = cy_a, cr = cr_a
    cdef cnp.int64_t[::1] count = count_a
    cdef double x, y, rr, cnt
    with nogil:
        for t in range(n):
            x = xc[t]
            y = yc[t]
            rr = r[t]
            hit = -1
            for c in range(m):
                if (fabs(cx[c] - x) <= tol and fabs(cy[c] - y) <= tol
                        and fabs(cr[c] - rr) <= tol):
                    hit = c
                    break
            if hit < 0:
                cx[m] = x
                cy[m] = y
                cr[m] = rr
                count[m] = 1
                m += 1
            else:
                count[hit] += 1
                cnt = <double>count[hit]
                cx[hit] += (x - cx[hit]) / cnt
                cy[hit] += (y - cy[hit]) / cnt
                cr[hit] += (rr - cr[hit]) / cnt
    return cx_a[:m].copy(), cy_a[:m].copy(), cr_a[:m].copy(), count_a[:m].copy()


def count_inliers(const double[:, ::1] pts, const double[::1] xc,
                  const double[::1] yc, const double[::1] r, double tol,
                  Py_ssize_t chunk=256):
    cdef Py_ssize_t h = xc.shape[0], n = pts.shape[0], s, p
    out_a = np.zeros(h, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_a
    cdef double dx, dy, res
    cdef cnp.int64_t acc
    with nogil:
        for s in range(h):
            acc = 0
            for p in range(n):
                dx = pts[p, 0] - xc[s]
                dy = pts[p, 1] - yc[s]
                res = fabs(sqrt(dx * dx + dy * dy) - r[s])
                if res <= tol:
                    acc += 1
            out[s] = acc
    return out_a
