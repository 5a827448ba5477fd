#!/usr/bin/env python3
"""Benchmark the compiled kernel lane against the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [--n 2000000] [--repeat 5]

Times the three hot kernels on same-size inputs for every importable lane
and prints a speedup table.  The compensated sums are also cross-checked
for bit-identical agreement between lanes.
"""

import argparse
import time

import numpy as np

from hardylab import kernels


def _time(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(7)
    n = args.n
    x = rng.standard_normal(n)
    bounds = np.arange(0, n + 1, 1 << 16, dtype=np.int64)
    if bounds[-1] != n:
        bounds = np.append(bounds, n)
    starts = rng.random((n // 4, 3))
    lengths = np.array([0.3, 0.45, 0.6])
    pts = rng.random((n // 4, 2))
    w = rng.random(n // 4)

    lanes = kernels.both_lanes()
    print(f"active backend: {kernels.BACKEND}; lanes: {[nm for nm, _ in lanes]}")
    print(f"sizes: kahan n={n}, arcs rows={n // 4}, boxes rows={n // 4}\n")
    header = f"{'kernel':<28}" + "".join(f"{nm:>14}" for nm, _ in lanes) + f"{'speedup':>10}"
    print(header)
    print("-" * len(header))

    rows = [
        ("kahan_segment_sums", lambda mod: (mod.kahan_segment_sums, (x, bounds))),
        ("arc_intersection_lengths", lambda mod: (mod.arc_intersection_lengths, (starts, lengths))),
        ("weighted_box_counts", lambda mod: (mod.weighted_box_counts, (pts, w, 4))),
    ]
    sums = {}
    for label, make in rows:
        times = []
        for nm, mod in lanes:
            fn, fargs = make(mod)
            t, out = _time(fn, *fargs, repeat=args.repeat)
            times.append(t)
            if label == "kahan_segment_sums":
                sums[nm] = out
        speed = times[-1] / times[0] if len(times) > 1 else 1.0
        cells = "".join(f"{t * 1e3:>12.1f}ms" for t in times)
        print(f"{label:<28}{cells}{speed:>9.1f}x")

    if len(sums) == 2:
        (s1, c1), (s2, c2) = sums.values()
        same = np.array_equal(s1, s2) and np.array_equal(c1, c2)
        print(f"\nkahan sums bit-identical across lanes: {same}")


if __name__ == "__main__":
    main()
