"""Weighted averaging engine: W-averages, multicorrelations, van der Corput
checks, weight partitions and progression decompositions.

Summation discipline: the weighted products are cut into fixed 2^16-element
chunks (split further at requested grid points), each chunk is summed with
Kahan compensation, and chunk results are merged in ascending order.  Chunk
sums are independent, so worker threads never change the result: reports
are bit-reproducible for any thread count.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import PreconditionError
from .germs import HardyExpr
from .rounding import RoundingMode, round_value
from .systems import (
    BoxSet,
    CyclicRotation,
    QuadraticSkew,
    TorusRotation,
    birkhoff_projection,
)

CHUNK = 1 << 16


def _segment_bounds(N, grid):
    cuts = set(range(0, N + 1, CHUNK))
    cuts.add(N)
    cuts.update(int(g) for g in grid if 0 <= g <= N)
    return np.array(sorted(cuts), dtype=np.int64)


def _segment_sums(x, bounds, threads=1):
    """Per-segment Kahan sums, optionally computed by a thread pool."""
    if threads <= 1 or len(bounds) <= 2:
        return kernels.kahan_segment_sums(x, bounds)
    nseg = len(bounds) - 1
    sums = np.zeros(nseg)
    comps = np.zeros(nseg)
    step = max(1, nseg // threads)
    jobs = []
    for lo in range(0, nseg, step):
        hi = min(lo + step, nseg)
        jobs.append((lo, hi))

    def work(job):
        lo, hi = job
        s, c = kernels.kahan_segment_sums(x, bounds[lo : hi + 1] - bounds[lo])
        return lo, hi, s, c

    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        offset_x = [x[bounds[lo] : bounds[hi]] for lo, hi in jobs]
        futs = [
            pool.submit(kernels.kahan_segment_sums, seg, bounds[lo : hi + 1] - bounds[lo])
            for (lo, hi), seg in zip(jobs, offset_x)
        ]
        for (lo, hi), fut in zip(jobs, futs):
            s, c = fut.result()
            sums[lo:hi] = s
            comps[lo:hi] = c
    return sums, comps


def prefix_sums_at(x, grid, threads=1):
    """Kahan prefix sums of x evaluated at the 1-based grid indices."""
    N = len(x)
    grid = [int(g) for g in grid]
    bounds = _segment_bounds(N, grid)
    sums, comps = _segment_sums(np.asarray(x, dtype=np.float64), bounds, threads)
    out = {}
    s = 0.0
    c = 0.0
    for j in range(len(bounds) - 1):
        for add in (float(sums[j]), float(comps[j])):
            y = add - c
            t = s + y
            c = (t - s) - y
            s = t
        if int(bounds[j + 1]) in grid:
            out[int(bounds[j + 1])] = s
    return [out[g] for g in grid]


@dataclass
class CorrelationReport:
    """Partial W-averages on an ascending N grid."""

    grid: list
    averages: list
    weight_totals: list
    mode: str = ""
    engine: str = "exact"
    stderr: list | None = None
    meta: dict = field(default_factory=dict)

    def csv_rows(self):
        head = ["N", "weighted_average", "weight_total", "stderr"]
        rows = [head]
        for i, g in enumerate(self.grid):
            se = "" if self.stderr is None else repr(self.stderr[i])
            avg = self.averages[i]
            rows.append([str(g), repr(avg), repr(self.weight_totals[i]), se])
        return rows

    def to_json(self):
        out = {
            "grid": list(self.grid),
            "averages": [_num_json(a) for a in self.averages],
            "weight_totals": list(self.weight_totals),
            "mode": self.mode,
            "engine": self.engine,
        }
        if self.stderr is not None:
            out["stderr"] = list(self.stderr)
        if self.meta:
            out["meta"] = self.meta
        return out


def _num_json(a):
    if isinstance(a, complex):
        return {"re": a.real, "im": a.imag}
    return a


def weighted_avg(values, weight, grid, threads=1, mode="", engine="exact",
                 stderr_values=None):
    """(1/W(N')) sum_{n<=N'} w(n) a(n) at every grid point N'."""
    grid = sorted(int(g) for g in grid)
    if not grid:
        raise PreconditionError("empty grid")
    N = grid[-1]
    a = np.asarray(values)
    if len(a) < N:
        raise PreconditionError("sequence shorter than the grid maximum")
    w = weight.weight_array(N)
    w_at = weight.values(np.asarray(grid, dtype=np.float64))
    if np.iscomplexobj(a):
        re = prefix_sums_at(w * a.real[:N], grid, threads)
        im = prefix_sums_at(w * a.imag[:N], grid, threads)
        avgs = [complex(r, i) / float(wt) for r, i, wt in zip(re, im, w_at)]
    else:
        sums = prefix_sums_at(w * a[:N].astype(np.float64), grid, threads)
        avgs = [float(s) / float(wt) for s, wt in zip(sums, w_at)]
    stderr = None
    if stderr_values is not None:
        se2 = prefix_sums_at((w * np.asarray(stderr_values)[:N]) ** 2, grid, threads)
        stderr = [float(np.sqrt(v)) / wt for v, wt in zip(se2, w_at)]
    return CorrelationReport(
        grid=grid,
        averages=avgs,
        weight_totals=[float(v) for v in w_at],
        mode=mode,
        engine=engine,
        stderr=stderr,
    )


# ---------------------------------------------------------------------------
# multicorrelation


def offsets_matrix(family, N, mode, digits=64, n_start=1):
    """Certified integer offsets [f_i(n)] for n = n_start..N, one row per n."""
    mode = RoundingMode.parse(mode)
    germs = list(family)
    out = []
    for f in germs:
        col = [round_value(f, n, mode, digits) for n in range(n_start, N + 1)]
        out.append(col)
    return list(zip(*out)) if out else [() for _ in range(N - n_start + 1)]


def multicorrelation(sys, A, family, mode, weight, grid, threads=1,
                     samples=4096, seed=0, digits=64):
    """W-average of mu(A cap T^-[f_1(n)]A cap ... cap T^-[f_k(n)]A).

    Exact for cyclic systems (residue sets) and torus rotations (arc
    intersections); stratified-sampled with reported standard error for the
    quadratic skew system.
    """
    grid = sorted(int(g) for g in grid)
    N = grid[-1]
    germs = list(family)
    if not germs:
        raise PreconditionError("empty family")
    offs = offsets_matrix(germs, N, mode, digits)
    alpha, stderr_vals, engine = correlation_values(
        sys, A, offs, samples=samples, seed=seed, digits=digits
    )
    return weighted_avg(
        alpha,
        weight,
        grid,
        threads,
        mode=RoundingMode.parse(mode).value,
        engine=engine,
        stderr_values=stderr_vals,
    )


def correlation_values(sys, A, offsets, samples=4096, seed=0, digits=64):
    """alpha(n) for precomputed offset rows; returns (values, stderr, engine)."""
    n_rows = len(offsets)
    if isinstance(sys, CyclicRotation):
        m = sys.modulus
        if isinstance(A, BoxSet):
            raise PreconditionError("cyclic systems take residue subsets")
        base = frozenset(int(x) % m for x in A)
        mask = 0
        for x in base:
            mask |= 1 << x
        full = (1 << m) - 1
        vals = np.zeros(n_rows)
        for i, row in enumerate(offsets):
            acc = mask
            for off in row:
                d = (off * sys.shift) % m
                rot = ((mask >> d) | (mask << (m - d))) & full
                acc &= rot
                if not acc:
                    break
            vals[i] = acc.bit_count() / m
        return vals, None, "exact-cyclic"
    if isinstance(sys, TorusRotation):
        if not isinstance(A, BoxSet) or A.dim != sys.dim:
            raise PreconditionError("torus multicorrelation needs a matching box")
        k = len(offsets[0]) if n_rows else 0
        vals = np.ones(n_rows)
        for coord in range(sys.dim):
            u, ln = A.arcs[coord]
            starts = np.empty((n_rows, k + 1))
            starts[:, 0] = u
            for i, row in enumerate(offsets):
                for j, off in enumerate(row):
                    s = _torus_shift(sys, coord, off, digits)
                    starts[i, j + 1] = (u - s) % 1.0
            lengths = np.full(k + 1, ln)
            vals *= kernels.arc_intersection_lengths(starts, lengths)
        return vals, None, "exact-box"
    if isinstance(sys, QuadraticSkew):
        if not isinstance(A, BoxSet) or A.dim != 2:
            raise PreconditionError("skew multicorrelation needs a 2-d box")
        pts = _stratified_points(samples, seed)
        # quantize x to 26 dyadic bits so 2*m*x reduces exactly in int64
        scale = 1 << 26
        xnum = np.round(pts[:, 0] * scale).astype(np.int64)
        pts[:, 0] = xnum / scale
        in_A = A.contains_many(pts)
        vals = np.zeros(n_rows)
        ses = np.zeros(n_rows)
        S = len(pts)
        for i, row in enumerate(offsets):
            ok = in_A.copy()
            for off in row:
                sa = _skew_frac(sys, off, digits)
                sa2 = _skew_frac2(sys, off, digits)
                xs = (pts[:, 0] + sa) % 1.0
                lin = ((int(2 * off) % scale) * xnum % scale) / scale
                ys = (pts[:, 1] + lin + sa2) % 1.0
                ok &= A.contains_many(np.stack([xs, ys], axis=1))
            p = float(np.mean(ok))
            vals[i] = p
            ses[i] = np.sqrt(max(p * (1 - p), 1.0 / S) / S)
        return vals, ses, "sampled-skew"
    raise PreconditionError(f"unsupported system {sys!r}")


_torus_cache = {}


def _torus_shift(sys, coord, off, digits):
    # the system itself is part of the key (frozen dataclass, hashable), so
    # cache entries can never alias across distinct systems
    key = (sys, coord, off, digits)
    v = _torus_cache.get(key)
    if v is None:
        from .systems import _frac_mul

        v = _frac_mul(sys.reg, sys.alphas[coord], off, digits)
        if len(_torus_cache) > 1 << 20:
            _torus_cache.clear()
        _torus_cache[key] = v
    return v


def _skew_frac(sys, off, digits):
    from .systems import _frac_mul

    return _frac_mul(sys.reg, sys.alpha, off, digits)


def _skew_frac2(sys, off, digits):
    from .systems import _frac_mul

    return _frac_mul(sys.reg, sys.alpha, off * off, digits)


def _stratified_points(samples, seed):
    """Deterministic stratified sample of T^2 (grid + Philox jitter)."""
    side = max(2, int(np.sqrt(samples)))
    rng = np.random.Generator(np.random.Philox(key=seed))
    jit = rng.random((side * side, 2))
    gx, gy = np.meshgrid(np.arange(side), np.arange(side), indexing="ij")
    grid = np.stack([gx.ravel(), gy.ravel()], axis=1).astype(np.float64)
    return (grid + jit) / side


def return_set_values(sys, A, family, mode, N, digits=64):
    """(offsets, alpha(n) > 0 flags) for n = 1..N on an exact engine."""
    offs = offsets_matrix(family, N, mode, digits)
    vals, se, engine = correlation_values(sys, A, offs, digits=digits)
    if se is not None:
        raise PreconditionError("return sets need an exact engine")
    return offs, vals > 0


# ---------------------------------------------------------------------------
# product limits (projection comparison)


def product_limit_test(sys, observables, family, mode, weight, N, x=None,
                       threads=1, digits=64):
    """Weighted average of prod h_i(T^[f_i(n)] x) vs the product of its
    orbit projections; returns both values and their distance."""
    germs = list(family)
    obs = list(observables)
    if len(obs) != len(germs):
        raise PreconditionError("one observable per function")
    if x is None:
        x = _default_point(sys)
    offs = offsets_matrix(germs, N, mode, digits)
    vals = np.ones(len(offs), dtype=np.complex128)
    for j, h in enumerate(obs):
        pts = _orbit_points(sys, x, [row[j] for row in offs], digits)
        vals *= h.at_points(pts)
    rep = weighted_avg(vals, weight, [N], threads, mode=RoundingMode.parse(mode).value)
    avg = rep.averages[0]
    proj = 1.0 + 0.0j
    for h in obs:
        proj *= birkhoff_projection(sys, h, x, N)
    return {
        "weighted_average": _num_json(avg),
        "projection_product": _num_json(complex(proj)),
        "distance": abs(avg - proj),
        "N": N,
    }


def _default_point(sys):
    if isinstance(sys, CyclicRotation):
        return 0
    if isinstance(sys, TorusRotation):
        return tuple(0.0 for _ in range(sys.dim))
    return (0.0, 0.0)


def _orbit_points(sys, x, offsets, digits=64):
    if isinstance(sys, CyclicRotation):
        return np.array([sys.apply_power(x, off) for off in offsets], dtype=np.int64)
    if isinstance(sys, TorusRotation):
        pts = np.empty((len(offsets), sys.dim))
        for i, off in enumerate(offsets):
            for c in range(sys.dim):
                pts[i, c] = (x[c] + _torus_shift(sys, c, off, digits)) % 1.0
        return pts
    if isinstance(sys, QuadraticSkew):
        pts = np.empty((len(offsets), 2))
        for i, off in enumerate(offsets):
            pts[i] = sys.apply_power(x, off)
        return pts
    raise PreconditionError(f"unsupported system {sys!r}")


# ---------------------------------------------------------------------------
# van der Corput finite check


def vdc_check(u, p, H):
    """Finite-truncation values of the weighted van der Corput inequality.

    u: complex values (length >= N + H where N = len(p)); p: positive
    weights.  Returns lhs = |(1/P_N) sum p_n u(n)|^2 and the H-averaged
    correlation magnitude rhs, plus their gap.
    """
    u = np.asarray(u, dtype=np.complex128)
    p = np.asarray(p, dtype=np.float64)
    N = len(p)
    if len(u) < N + H:
        raise PreconditionError("need u defined up to N + H")
    P = float(np.sum(p))
    lhs = abs(np.sum(p * u[:N]) / P) ** 2
    acc = 0.0 + 0.0j
    for m in range(1, H + 1):
        acc += np.sum(p * u[m : N + m] * np.conj(u[:N])) / P
    rhs = abs(acc / H)
    return {"lhs": float(lhs), "rhs": float(rhs), "gap": float(rhs - lhs),
            "N": N, "H": H}


# ---------------------------------------------------------------------------
# weight partition (level sets of a slow function)


def partition_weights(weight, g, N):
    """Level sets K_j = {n : j-1 < g(n) <= j}, their weights and diagnostics.

    Requires log W << g << t in growth order.  Returns per-level sizes,
    p_j, P_j and the four ratio diagnostics (increment ratio, W(g^-1)/P,
    P itself, p/P).
    """
    from .germs import compare

    if compare(weight.log_germ, g).kind != "precedes":
        raise PreconditionError("need log W << g")
    reg = g.reg
    t_germ = HardyExpr.t_power(reg, 1)
    if compare(g, t_germ).kind == "dominates":
        raise PreconditionError("need g growing no faster than t")
    gN = g.float_at(N)
    J = int(np.floor(gN))
    if J < 2:
        raise PreconditionError("g(N) too small to form level sets")
    # n_j = largest n with g(n) <= j (certified by germ comparison at the edge)
    n_of = [0] * (J + 1)
    lo = 1
    for j in range(1, J + 1):
        hi = N
        a, b = lo, hi
        while a < b:
            mid = (a + b + 1) // 2
            if g.float_at(mid) <= j:
                a = mid
            else:
                b = mid - 1
        n_of[j] = a
        lo = max(a, 1)
    sizes = [n_of[j] - n_of[j - 1] for j in range(1, J + 1)]
    Wv = weight.values(np.arange(1, N + 3, dtype=np.float64))

    def W_at(n):
        return float(Wv[n - 1]) if n >= 1 else float(Wv[0])

    p = [W_at(n_of[j] + 1) - W_at(n_of[j - 1] + 1) for j in range(1, J + 1)]
    P = np.cumsum(p)
    ginv = lambda y: _germ_inverse(g, y, N * 4 + 16)
    ratios = {"increment": [], "W_over_P": [], "P": [], "p_over_P": []}
    idx = []
    for n in range(2, J):
        idx.append(n)
        wd = weight.value(ginv(n + 1)) - weight.value(ginv(n))
        ratios["increment"].append(wd / p[n - 1] if p[n - 1] else float("nan"))
        ratios["W_over_P"].append(weight.value(ginv(n)) / P[n - 1])
        ratios["P"].append(float(P[n - 1]))
        ratios["p_over_P"].append(p[n - 1] / P[n - 1])
    return {
        "levels": J,
        "sizes": sizes,
        "p": p,
        "P": [float(v) for v in P],
        "ratio_index": idx,
        "ratios": ratios,
    }


def _germ_inverse(g, y, hi_limit):
    lo, hi = 1.0, 2.0
    while g.float_at(max(hi, 1)) < y:
        hi *= 2
        if hi > hi_limit:
            break
    for _ in range(80):
        mid = (lo + hi) / 2
        if g.float_at(max(mid, 1)) < y:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


# ---------------------------------------------------------------------------
# averages over arithmetic progressions


def ap_decomposition_check(values, weight, R, N, threads=1):
    """Residual between the full W-average at RN and the progression mix.

    values[i] holds a(i+1), so the array must cover n = 1 .. RN + R."""
    if R < 1:
        raise PreconditionError("R must be >= 1")
    a = np.asarray(values)
    need = R * N + R
    if len(a) < need:
        raise PreconditionError(f"need the sequence up to n = {need}")
    full = weighted_avg(a, weight, [R * N], threads).averages[0]
    w = weight.weight_array(N)
    WN = weight.value(N)
    acc = 0.0 if not np.iscomplexobj(a) else 0.0 + 0.0j
    for d in range(R):
        sub = a[(R * np.arange(1, N + 1) + d) - 1]
        if np.iscomplexobj(a):
            re = prefix_sums_at(w * sub.real, [N], threads)[0]
            im = prefix_sums_at(w * sub.imag, [N], threads)[0]
            acc += complex(re, im) / WN
        else:
            acc += prefix_sums_at(w * sub.astype(np.float64), [N], threads)[0] / WN
    mix = acc / R
    return {"full": _num_json(full), "progression_mix": _num_json(mix),
            "residual": abs(full - mix), "R": R, "N": N}
