"""Closed-form simulators of the measure-preserving systems used in tests.

Three system kinds: finite cyclic rotations, d-torus rotations with
declared-constant angles, and a quadratic skew product on T^2 (the 2-step
stand-in for nilsystems, realizing orbits n -> (n a, n^2 a)).  Every
variant exposes an exact m-th power, never iterated; torus coordinates
are reduced at precision scaled to the bit length of m, so powers up to
and beyond 10^12 stay accurate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import numpy as np

from .constants import digits_to_bits
from .errors import PreconditionError


def _frac_mul(reg, sym_value, m, digits=64):
    """{m * value} as float, computed at digits + size(m) precision."""
    bits = digits_to_bits(digits) + max(int(abs(m)).bit_length(), 1)
    enc = reg.value_enclosure(sym_value, bits)
    ctx = gmpy2.context(precision=bits)
    v = ctx.mul(enc.mid, gmpy2.mpz(m))
    f = ctx.sub(v, ctx.floor(v))
    return float(f)


@dataclass(frozen=True)
class CyclicRotation:
    """x -> x + a on Z_modulus with normalized counting measure."""

    modulus: int
    shift: int

    kind = "cyclic"

    def __post_init__(self):
        if not (0 <= self.shift < self.modulus):
            raise PreconditionError("cyclic shift must satisfy 0 <= a < m")

    def apply_power(self, x, m):
        return (x + m * self.shift) % self.modulus

    def preimage_subset(self, subset, m):
        """T^{-m} S for S a set of residues."""
        d = (m * self.shift) % self.modulus
        return frozenset((x - d) % self.modulus for x in subset)


@dataclass(frozen=True)
class TorusRotation:
    """x -> x + alpha on T^d; angles are SymbolicReals over a registry."""

    reg: object
    alphas: tuple

    kind = "torus"

    @property
    def dim(self):
        return len(self.alphas)

    def apply_power(self, x, m):
        out = []
        for xi, al in zip(x, self.alphas):
            s = _frac_mul(self.reg, al, m)
            out.append((xi + s) % 1.0)
        return tuple(out)

    def shift_fracs(self, m, digits=64):
        return tuple(_frac_mul(self.reg, al, m, digits) for al in self.alphas)

    def alpha_floats(self):
        return tuple(float(self.reg.value_enclosure(a, 96).mid) for a in self.alphas)


@dataclass(frozen=True)
class QuadraticSkew:
    """T(x,y) = (x + a, y + 2x + a) on T^2; T^m(x,y) = (x+ma, y+2mx+m^2 a)."""

    reg: object
    alpha: object  # SymbolicReal

    kind = "skew"

    def apply_power(self, point, m):
        x, y = point
        sa = _frac_mul(self.reg, self.alpha, m)
        sa2 = _frac_mul(self.reg, self.alpha, m * m)
        # 2*m*x reduced exactly: a float coordinate is an exact rational
        lin = float((2 * m * Fraction(x)) % 1)
        return ((x + sa) % 1.0, (y + lin + sa2) % 1.0)

    def orbit_fracs(self, m):
        """({m a}, {m^2 a}): the orbit of (0, 0)."""
        return (_frac_mul(self.reg, self.alpha, m),
                _frac_mul(self.reg, self.alpha, m * m))


# ---------------------------------------------------------------------------
# box sets on the torus


class BoxSet:
    """Product of half-open circle arcs; each arc stored as (start, length)."""

    __slots__ = ("arcs",)

    def __init__(self, arcs):
        cleaned = []
        for u, ln in arcs:
            u = float(u) % 1.0
            ln = float(ln)
            if not 0.0 <= ln <= 1.0:
                raise PreconditionError("arc length must lie in [0, 1]")
            if ln == 1.0:
                u = 0.0
            cleaned.append((u, ln))
        self.arcs = tuple(cleaned)

    @classmethod
    def from_endpoints(cls, pairs):
        """Arcs [u, v) with wraparound; [0, 1) (or u == v+1) is full."""
        arcs = []
        for u, v in pairs:
            u0 = float(u)
            v0 = float(v)
            if v0 - u0 == 1.0:
                arcs.append((0.0, 1.0))
                continue
            u0 %= 1.0
            v0 %= 1.0
            arcs.append((u0, (v0 - u0) % 1.0))
        return cls(arcs)

    @property
    def dim(self):
        return len(self.arcs)

    def measure(self):
        out = 1.0
        for _, ln in self.arcs:
            out *= ln
        return out

    def translate(self, shifts):
        return BoxSet(tuple(((u + s) % 1.0, ln) for (u, ln), s in zip(self.arcs, shifts)))

    def contains(self, point):
        return all((x - u) % 1.0 < ln for (u, ln), x in zip(self.arcs, point))

    def contains_many(self, pts):
        """Vectorized membership for an (n, d) float array of torus points."""
        pts = np.asarray(pts, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        ok = np.ones(len(pts), dtype=bool)
        for j, (u, ln) in enumerate(self.arcs):
            if ln == 0.0:
                return np.zeros(len(pts), dtype=bool)
            ok &= (pts[:, j] - u) % 1.0 < ln
        return ok

    def to_json(self):
        out = []
        for u, ln in self.arcs:
            if ln == 1.0:
                out.append([0.0, 1.0])
            else:
                v = u + ln
                out.append([u, v if v <= 1.0 else v - 1.0])
        return out

    @classmethod
    def from_json(cls, arr):
        return cls.from_endpoints(arr)

    def __repr__(self):
        return "Box(" + ", ".join(
            f"[{u}, {(u + ln) if u + ln <= 1 else u + ln - 1})" for u, ln in self.arcs
        ) + ")"


def preimage_box(sys, box, m):
    """Exact T^{-m} of a box under a torus rotation (boxes map to boxes)."""
    if not isinstance(sys, TorusRotation):
        raise PreconditionError("preimage_box requires a torus rotation")
    if box.dim != sys.dim:
        raise PreconditionError("box dimension mismatch")
    if m == 0:
        return box
    shifts = sys.shift_fracs(m)
    return box.translate(tuple(-s for s in shifts))


def arcs_intersection_length(arcs):
    """Length of the intersection of circle arcs (may split into pieces)."""
    arcs = [(u, ln) for u, ln in arcs]
    if any(ln == 0.0 for _, ln in arcs):
        return 0.0
    proper = [(u, ln) for u, ln in arcs if ln < 1.0]
    if not proper:
        return 1.0
    # endpoints split the circle into elementary arcs; test midpoints
    pts = sorted({u for u, _ in proper} | {(u + ln) % 1.0 for u, ln in proper})
    total = 0.0
    k = len(pts)
    for i in range(k):
        a = pts[i]
        b = pts[i + 1] if i + 1 < k else pts[0] + 1.0
        mid = ((a + b) / 2.0) % 1.0
        if all((mid - u) % 1.0 < ln for u, ln in proper):
            total += b - a
    return total


def measure_intersection(boxes):
    """Exact measure of an intersection of boxes (product over coordinates)."""
    boxes = list(boxes)
    if not boxes:
        return 1.0
    d = boxes[0].dim
    for b in boxes:
        if b.dim != d:
            raise PreconditionError("boxes of mixed dimension")
    total = 1.0
    for j in range(d):
        total *= arcs_intersection_length([b.arcs[j] for b in boxes])
        if total == 0.0:
            return 0.0
    return total


# ---------------------------------------------------------------------------
# observables


class Observable:
    """Character / box indicator / tabulated values, per system kind."""

    def __init__(self, kind, data):
        self.kind = kind
        self.data = data

    @classmethod
    def character(cls, freqs):
        return cls("character", tuple(int(h) for h in freqs))

    @classmethod
    def box_indicator(cls, box):
        return cls("box", box)

    @classmethod
    def tabulated(cls, values):
        return cls("tabulated", np.asarray(values, dtype=np.complex128))

    @classmethod
    def one(cls):
        return cls("character", ())

    def at_points(self, pts):
        """Vectorized evaluation at an (n, d) float array (or int residues)."""
        if self.kind == "character":
            pts = np.asarray(pts, dtype=np.float64)
            if pts.ndim == 1:
                pts = pts[:, None]
            phase = np.zeros(len(pts))
            for j, h in enumerate(self.data):
                phase += h * pts[:, j]
            return np.exp(2j * np.pi * phase)
        if self.kind == "box":
            return self.data.contains_many(pts).astype(np.complex128)
        vals = self.data
        idx = np.asarray(pts, dtype=np.int64).reshape(len(pts), -1)[:, 0] % len(vals)
        return vals[idx]

    def sup_norm(self):
        if self.kind in ("character", "box"):
            return 1.0
        return float(np.max(np.abs(self.data))) if len(self.data) else 0.0


def birkhoff_projection(sys, h, x, N):
    """(1/N) sum_{n<=N} h(T^n x); plain orbit average, vectorized."""
    if N < 1:
        raise PreconditionError("N must be >= 1")
    n = np.arange(1, N + 1, dtype=np.float64)
    if isinstance(sys, CyclicRotation):
        pts = (int(x) + np.arange(1, N + 1, dtype=np.int64) * sys.shift) % sys.modulus
        return complex(np.mean(h.at_points(pts)))
    if isinstance(sys, TorusRotation):
        cols = [(xi + n * a) % 1.0 for xi, a in zip(x, sys.alpha_floats())]
        return complex(np.mean(h.at_points(np.stack(cols, axis=1))))
    if isinstance(sys, QuadraticSkew):
        a = float(sys.reg.value_enclosure(sys.alpha, 96).mid)
        x0, y0 = x
        xs = (x0 + n * a) % 1.0
        ys = (y0 + 2 * n * x0 + n * n * a) % 1.0
        return complex(np.mean(h.at_points(np.stack([xs, ys], axis=1))))
    raise PreconditionError(f"unknown system {sys!r}")
