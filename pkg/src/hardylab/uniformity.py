"""Uniformity seminorms on finite cyclic systems and equidistribution tests.

On Z_m with an ergodic shift the defining Cesaro limits of the uniformity
seminorms are exact averages over one period, so the recursion

    |||h|||_0        = avg h
    |||h|||_s^(2^s)  = avg_n |||conj(h) . h(.+na)|||_{s-1}^(2^{s-1})

is computed exactly (up to float rounding).  A brute-force cube average
over all difference tuples serves as the independent oracle.

Equidistribution diagnostics are W-averaged Weyl sums over a frequency
window and dyadic box-count discrepancies for product-torus orbit tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .correlate import offsets_matrix, prefix_sums_at
from .errors import PreconditionError
from .systems import QuadraticSkew, TorusRotation


class FiniteObservable:
    """Complex values on Z_m with an acting shift a, gcd(a, m) = 1."""

    def __init__(self, values, shift=1):
        self.values = np.asarray(values, dtype=np.complex128)
        self.m = len(self.values)
        self.shift = int(shift) % self.m
        if self.m < 1:
            raise PreconditionError("need at least one point")
        import math

        if math.gcd(self.shift, self.m) != 1:
            raise PreconditionError("shift must be coprime to the modulus")

    def shifted(self, n):
        return np.roll(self.values, -((n * self.shift) % self.m))


def gowers_seminorm(h, s):
    """|||h|||_s by the exact recursion on Z_m."""
    if s < 0:
        raise PreconditionError("s must be >= 0")
    val = _gowers_pow(h.values, h.shift, s)
    if s == 0:
        return val
    mag = max(val.real, 0.0)
    return mag ** (1.0 / (1 << s))


def _gowers_pow(vals, shift, s):
    """|||h|||_s^(2^s) as a complex number (real and >= 0 for s >= 1)."""
    m = len(vals)
    if s == 0:
        return complex(np.mean(vals))
    acc = 0.0 + 0.0j
    for n in range(m):
        g = np.conj(vals) * np.roll(vals, -((n * shift) % m))
        acc += _gowers_pow(g, shift, s - 1)
    return acc / m


def gowers_box_oracle(h, s):
    """|||h|||_s via the full 2^s-fold cube average (brute force)."""
    if s < 1:
        raise PreconditionError("oracle needs s >= 1")
    vals = h.values
    m = h.m
    a = h.shift
    total = 0.0 + 0.0j
    for x in range(m):
        for ns in itertools.product(range(m), repeat=s):
            prod = 1.0 + 0.0j
            for eps in itertools.product((0, 1), repeat=s):
                idx = (x + a * sum(e * n for e, n in zip(eps, ns))) % m
                v = vals[idx]
                if sum(eps) % 2 == 1:
                    v = np.conj(v)
                prod *= v
            total += prod
    avg = total / (m ** (s + 1))
    return max(avg.real, 0.0) ** (1.0 / (1 << s))


# ---------------------------------------------------------------------------
# discrepancy reports


@dataclass
class DiscrepancyReport:
    kind: str
    N: int
    values: dict = field(default_factory=dict)
    worst: float = 0.0
    meta: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "kind": self.kind,
            "N": self.N,
            "worst": self.worst,
            "values": {str(k): v for k, v in self.values.items()},
            "meta": self.meta,
        }

    def csv_rows(self):
        head = ["N", "h_or_box_level", "value"]
        rows = [head]
        for k, v in self.values.items():
            rows.append([str(self.N), str(k), repr(v)])
        return rows


def weyl_discrepancy(phases, weight, N, h_max, threads=1):
    """max_{1<=|h|<=h_max} |(1/W(N)) sum w(n) e(h x_n)| for x_n mod 1."""
    if h_max < 1:
        raise PreconditionError("h_max must be >= 1")
    x = np.asarray(phases, dtype=np.float64)[:N]
    if len(x) < N:
        raise PreconditionError("phase sequence shorter than N")
    w = weight.weight_array(N)
    WN = weight.value(N)
    vals = {}
    worst = 0.0
    for h in range(1, h_max + 1):
        re = prefix_sums_at(w * np.cos(2 * np.pi * h * x), [N], threads)[0]
        im = prefix_sums_at(w * np.sin(2 * np.pi * h * x), [N], threads)[0]
        mag = abs(complex(re, im)) / WN
        vals[h] = mag
        worst = max(worst, mag)
    return DiscrepancyReport("weyl", N, vals, worst)


def joint_orbit_discrepancy(sys, family, mode, weight, N, max_level=4,
                            x=None, digits=64, threads=1):
    """Box-count discrepancy of the orbit tuple against product Haar measure.

    Builds the W-weighted empirical distribution of
    (x + [f_1(n)] a, ..., x + [f_k(n)] a) over dyadic boxes down to side
    2^-max_level and reports the worst deviation per level, plus the
    closest weighted-orbit approach to the identity (support probe).
    """
    germs = list(family)
    k = len(germs)
    if isinstance(sys, TorusRotation):
        if sys.dim != 1:
            raise PreconditionError("joint orbits use 1-d base rotations")
        if k > 4:
            raise PreconditionError("box counting limited to dimension <= 4")
        offs = offsets_matrix(germs, N, mode, digits)
        pts = np.empty((N, k))
        from .correlate import _torus_shift

        x0 = 0.0 if x is None else float(x[0])
        for i, row in enumerate(offs):
            for j, off in enumerate(row):
                pts[i, j] = (x0 + _torus_shift(sys, 0, off, digits)) % 1.0
    elif isinstance(sys, QuadraticSkew):
        if k != 1:
            raise PreconditionError("skew joint orbits take a single function")
        offs = offsets_matrix(germs, N, mode, digits)
        pts = np.empty((N, 2))
        for i, (off,) in enumerate(offs):
            pts[i] = sys.orbit_fracs(off)
        k = 2
    else:
        raise PreconditionError("joint orbit discrepancy needs a torus or skew system")
    w = weight.weight_array(N)
    WN = float(np.sum(w))
    per_level = {}
    worst = 0.0
    for level in range(1, max_level + 1):
        counts = kernels.weighted_box_counts(pts, w, level)
        vol = 2.0 ** (-level * k)
        disc = float(np.max(np.abs(counts / WN - vol)))
        per_level[level] = disc
        worst = max(worst, disc)
    dist = np.max(np.minimum(pts, 1.0 - pts), axis=1)
    support = float(np.min(dist))
    rep = DiscrepancyReport(
        "joint_orbit",
        N,
        per_level,
        worst,
        meta={"identity_distance": support, "dimension": k},
    )
    return rep
