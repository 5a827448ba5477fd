# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot kernels (see _kernels_py for specs)."""

import numpy as np

cimport cython
from libc.math cimport floor

BACKEND = "compiled"


def kahan_segment_sums(x, bounds):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef long long[::1] bv = np.ascontiguousarray(bounds, dtype=np.int64)
    cdef Py_ssize_t nseg = bv.shape[0] - 1
    sums_np = np.zeros(nseg)
    comps_np = np.zeros(nseg)
    cdef double[::1] sums = sums_np
    cdef double[::1] comps = comps_np
    cdef Py_ssize_t j, i
    cdef double s, c, y, t
    with nogil:
        for j in range(nseg):
            s = 0.0
            c = 0.0
            for i in range(bv[j], bv[j + 1]):
                y = xv[i] - c
                t = s + y
                c = (t - s) - y
                s = t
            sums[j] = s
            comps[j] = c
    return sums_np, comps_np


cdef inline double _mod1(double x) nogil:
    x = x - floor(x)
    if x >= 1.0:
        x -= 1.0
    if x < 0.0:
        x += 1.0
    return x


def arc_intersection_lengths(starts, lengths):
    cdef double[:, ::1] st_all = np.ascontiguousarray(starts, dtype=np.float64)
    cdef double[::1] ln_all = np.ascontiguousarray(lengths, dtype=np.float64)
    cdef Py_ssize_t n = st_all.shape[0]
    cdef Py_ssize_t k = st_all.shape[1]
    out_np = np.zeros(n)
    cdef double[::1] out = out_np
    cdef Py_ssize_t i, j, m, idx, a, b
    cdef double total, lo, hi, mid, width
    cdef double pts[64]
    cdef double live_start[32]
    cdef double live_len[32]
    cdef double tmp
    cdef bint ok
    if k > 32:
        raise ValueError("at most 32 arcs per row")
    for j in range(k):
        if ln_all[j] == 0.0:
            return out_np
    with nogil:
        for i in range(n):
            m = 0
            for j in range(k):
                if ln_all[j] < 1.0:
                    live_start[m] = st_all[i, j]
                    live_len[m] = ln_all[j]
                    m += 1
            if m == 0:
                out[i] = 1.0
                continue
            for j in range(m):
                pts[2 * j] = live_start[j]
                pts[2 * j + 1] = _mod1(live_start[j] + live_len[j])
            # insertion sort of 2m endpoints
            for a in range(1, 2 * m):
                tmp = pts[a]
                b = a
                while b > 0 and pts[b - 1] > tmp:
                    pts[b] = pts[b - 1]
                    b -= 1
                pts[b] = tmp
            total = 0.0
            for a in range(2 * m):
                lo = pts[a]
                if a + 1 < 2 * m:
                    hi = pts[a + 1]
                else:
                    hi = pts[0] + 1.0
                width = hi - lo
                if width <= 0.0:
                    continue
                mid = _mod1((lo + hi) / 2.0)
                ok = True
                for j in range(m):
                    if not (_mod1(mid - live_start[j]) < live_len[j]):
                        ok = False
                        break
                if ok:
                    total += width
            out[i] = total
    return out_np


def weighted_box_counts(points, weights, level):
    cdef double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t d = pts.shape[1]
    cdef int lev = int(level)
    cdef long long side = 1 << lev
    out_np = np.zeros(1 << (lev * d))
    cdef double[::1] out = out_np
    cdef Py_ssize_t i, j
    cdef long long flat, cell
    with nogil:
        for i in range(n):
            flat = 0
            for j in range(d):
                cell = <long long>(pts[i, j] * side)
                if cell >= side:
                    cell = side - 1
                if cell < 0:
                    cell = 0
                flat = (flat << lev) | cell
            out[flat] += w[i]
    return out_np
