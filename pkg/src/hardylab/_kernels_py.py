"""Pure-Python/numpy fallback implementations of the hot kernels.

Semantics match the compiled lane: Kahan-compensated sums are evaluated
sequentially inside each segment (bit-identical to the C loop), and arc
intersections follow the same endpoint-splitting algorithm, vectorized
over rows in chunks.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def kahan_segment_sums(x, bounds):
    """Compensated sums of x over segments [bounds[i], bounds[i+1])."""
    x = np.asarray(x, dtype=np.float64)
    bounds = np.asarray(bounds, dtype=np.int64)
    nseg = len(bounds) - 1
    sums = np.zeros(nseg)
    comps = np.zeros(nseg)
    for j in range(nseg):
        s = 0.0
        c = 0.0
        for v in x[bounds[j] : bounds[j + 1]]:
            y = float(v) - c
            t = s + y
            c = (t - s) - y
            s = t
        sums[j] = s
        comps[j] = c
    return sums, comps


def arc_intersection_lengths(starts, lengths):
    """Per-row intersection length of k circle arcs [s_i, s_i + l_i).

    starts: (N, k) float64 in [0, 1); lengths: (k,) float64 in [0, 1].
    Rows are processed in vectorized chunks; full arcs (length 1) are
    neutral and zero-length arcs collapse the row to 0.
    """
    starts = np.ascontiguousarray(starts, dtype=np.float64)
    lengths = np.asarray(lengths, dtype=np.float64)
    n, k = starts.shape
    out = np.zeros(n)
    if any(l == 0.0 for l in lengths):
        return out
    live = lengths < 1.0
    if not live.any():
        out[:] = 1.0
        return out
    st = starts[:, live]
    ln = lengths[live]
    m = st.shape[1]
    chunk = 1 << 15
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        s = st[lo:hi]
        ends = (s + ln[None, :]) % 1.0
        pts = np.sort(np.concatenate([s, ends], axis=1), axis=1)
        nxt = np.concatenate([pts[:, 1:], pts[:, :1] + 1.0], axis=1)
        widths = nxt - pts
        mids = ((pts + nxt) / 2.0) % 1.0
        inside = np.ones(mids.shape, dtype=bool)
        for j in range(m):
            inside &= (mids - s[:, j : j + 1]) % 1.0 < ln[j]
        out[lo:hi] = np.sum(widths * inside, axis=1)
    return out


def weighted_box_counts(points, weights, level):
    """W-weighted counts over the dyadic grid of side 2^-level.

    points: (N, d) floats in [0,1); returns a flat array of 2^(level*d)
    weighted counts in C-order over the grid.
    """
    pts = np.asarray(points, dtype=np.float64)
    n, d = pts.shape
    cells = np.minimum((pts * (1 << level)).astype(np.int64), (1 << level) - 1)
    flat = np.zeros(n, dtype=np.int64)
    for j in range(d):
        flat = (flat << level) | cells[:, j]
    out = np.zeros(1 << (level * d))
    np.add.at(out, flat, np.asarray(weights, dtype=np.float64))
    return out
