"""Pattern search in integer sets: configurations {a, a+[f_1(n)], ...}.

Sets come in four flavors: explicit bitsets, periodic residue sets (odds,
evens, ...), Bohr sets cut out by fractional-part windows of declared
irrationals, and named predicates.  Searches run in lexicographic (n, a)
order; a None result is exhaustive within the stated bounds and every
reported witness re-verifies membership of all pattern elements with
certified arithmetic.

Bohr-set scans are made rigorous by outward-inflating all comparison
windows at float precision and re-certifying every surviving candidate at
full precision, so inflation can only add candidates, never drop a witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
import numpy as np

from .constants import digits_to_bits
from .errors import PreconditionError, PrecisionExhaustedError
from .rounding import RoundingMode, round_value

_GUARD = 1e-9


class IntegerSet:
    """Base: membership is a pure function of n; n < 1 is never a member."""

    name = "set"

    def contains(self, n):
        raise NotImplementedError

    def count_upto(self, N):
        return sum(1 for n in range(1, N + 1) if self.contains(n))

    def first_anchor(self, offsets, a_max):
        """Smallest a <= a_max with a and every a + off in the set."""
        lo = max(1, 1 - min(offsets, default=0))
        for a in range(lo, a_max + 1):
            if self.contains(a) and all(self.contains(a + o) for o in offsets):
                return a
        return None


class ExplicitSet(IntegerSet):
    """Bitset over 1..n_max (bit n set iff n is a member)."""

    def __init__(self, members=(), n_max=None, mask=None):
        if mask is not None:
            self.mask = mask
            self.n_max = int(n_max)
        else:
            members = sorted(set(int(m) for m in members if m >= 1))
            self.n_max = int(n_max if n_max is not None else (members[-1] if members else 0))
            m = 0
            for x in members:
                if x <= self.n_max:
                    m |= 1 << x
            self.mask = m
        self.name = "explicit"

    @classmethod
    def from_flags(cls, flags, n_max):
        mask = 0
        for i, f in enumerate(flags):
            if f:
                mask |= 1 << (i + 1)
        return cls(mask=mask, n_max=n_max)

    def contains(self, n):
        return 1 <= n <= self.n_max and bool((self.mask >> n) & 1)

    def members(self):
        return [n for n in range(1, self.n_max + 1) if (self.mask >> n) & 1]

    def count_upto(self, N):
        lim = min(N, self.n_max)
        return (self.mask & ((1 << (lim + 1)) - 1)).bit_count()

    def first_anchor(self, offsets, a_max):
        acc = self.mask
        for o in offsets:
            if o >= 0:
                acc &= self.mask >> o
            else:
                acc &= self.mask << (-o)
            if not acc:
                return None
        acc &= (1 << (min(a_max, self.n_max) + 1)) - 1
        acc >>= 1
        if not acc:
            return None
        return ((acc & -acc).bit_length())

    def __eq__(self, other):
        return (
            isinstance(other, ExplicitSet)
            and self.n_max == other.n_max
            and self.mask == other.mask
        )

    def __hash__(self):
        return hash((self.n_max, self.mask))


class PeriodicSet(IntegerSet):
    """Membership depends on n mod period (pattern[r] for residue r)."""

    def __init__(self, pattern, name=None):
        self.pattern = tuple(bool(b) for b in pattern)
        self.period = len(self.pattern)
        self.name = name or f"periodic{self.period}"
        if self.period < 1 or not any(self.pattern):
            raise PreconditionError("periodic set must be nonempty")

    @classmethod
    def odds(cls):
        return cls((False, True), "odds")

    @classmethod
    def evens(cls):
        return cls((True, False), "evens")

    def contains(self, n):
        return n >= 1 and self.pattern[n % self.period]

    def count_upto(self, N):
        full, rest = divmod(N, self.period)
        cnt = full * sum(self.pattern)
        cnt += sum(1 for r in range(1, rest + 1) if self.pattern[r % self.period])
        return cnt

    def first_anchor(self, offsets, a_max):
        p = self.period
        lo = max(1, 1 - min(offsets, default=0))
        best = None
        for r in range(p):
            if not self.pattern[r]:
                continue
            if not all(self.pattern[(r + o) % p] for o in offsets):
                continue
            a = lo + ((r - lo) % p)
            if a <= a_max and (best is None or a < best):
                best = a
        return best


class PredicateSet(IntegerSet):
    """Named pure membership rule (used for custom experiments)."""

    def __init__(self, fn, name="predicate"):
        self.fn = fn
        self.name = name

    def contains(self, n):
        return n >= 1 and bool(self.fn(n))


class BohrSet(IntegerSet):
    """{n : {n * alpha_c} in window_c for every coordinate c}.

    alphas are SymbolicReals over a registry; windows are (start, length)
    arcs.  Membership near a window boundary escalates precision.
    """

    def __init__(self, reg, alphas, windows, digits=64):
        self.reg = reg
        self.alphas = list(alphas)
        self.windows = [(float(u) % 1.0, float(ln)) for u, ln in windows]
        if len(self.alphas) != len(self.windows):
            raise PreconditionError("one window per constant")
        self.digits = digits
        self.name = "bohr"
        self._frac_cache = {}

    @classmethod
    def from_endpoint_windows(cls, reg, alphas, pairs, digits=64):
        win = []
        for u, v in pairs:
            u, v = float(u), float(v)
            win.append((u % 1.0, (v - u) % 1.0 if v - u != 1.0 else 1.0))
        return cls(reg, alphas, win, digits)

    # certified fractional parts ------------------------------------------------

    def frac(self, n, coord):
        """{n * alpha_coord} as a float (certified to ~1e-15)."""
        key = (n, coord)
        v = self._frac_cache.get(key)
        if v is None:
            bits = digits_to_bits(self.digits) + max(int(abs(n)).bit_length(), 1)
            enc = self.reg.value_enclosure(self.alphas[coord], bits)
            ctx = gmpy2.context(precision=bits)
            val = ctx.mul(enc.mid, gmpy2.mpz(n))
            v = float(ctx.sub(val, ctx.floor(val)))
            if len(self._frac_cache) > (1 << 21):
                self._frac_cache.clear()
            self._frac_cache[key] = v
        return v

    def _in_window(self, frac_val, coord, margin=0.0):
        u, ln = self.windows[coord]
        return (frac_val - u) % 1.0 < ln + margin

    def contains(self, n, strict=True):
        if n < 1:
            return False
        for c in range(len(self.alphas)):
            fv = self.frac(n, c)
            u, ln = self.windows[c]
            d = (fv - u) % 1.0
            if strict and min(abs(d - ln), abs(d), abs(d - 1.0)) < _GUARD:
                return self._contains_certified(n, c)
            if not d < ln:
                return False
        return True

    def _contains_certified(self, n, coord):
        u, ln = self.windows[coord]
        bits = digits_to_bits(self.digits) + int(abs(n)).bit_length()
        while bits <= digits_to_bits(512):
            enc = self.reg.value_enclosure(self.alphas[coord], bits)
            ctx = gmpy2.context(precision=bits)
            lo = ctx.mul(enc.lo, gmpy2.mpz(n))
            hi = ctx.mul(enc.hi, gmpy2.mpz(n))
            flo = ctx.sub(lo, ctx.floor(lo))
            fhi = ctx.sub(hi, ctx.floor(hi))
            if ctx.floor(lo) == ctx.floor(hi):
                dlo = float(ctx.sub(flo, gmpy2.mpfr(u)))
                dhi = float(ctx.sub(fhi, gmpy2.mpfr(u)))
                if (dlo % 1.0) < ln and (dhi % 1.0) < ln:
                    return True
                if not ((dlo % 1.0) < ln) and not ((dhi % 1.0) < ln):
                    return False
            bits *= 2
        raise PrecisionExhaustedError(
            f"Bohr membership of n={n} sits on a window boundary"
        )

    def frac_array(self, a_max, coord):
        """{a * alpha} for a = 1..a_max, accurate to ~a_max * 1e-16."""
        if a_max > (1 << 22):
            raise PreconditionError("Bohr scans support a_max up to 2^22")
        key = ("arr", coord, a_max)
        arr = self._frac_cache.get(key)
        if arr is None:
            enc = self.reg.value_enclosure(self.alphas[coord], 160)
            a_float = float(enc.mid)
            # split alpha = m/2^40 + lo so n*m/2^40 reduces exactly in int64
            m = int(gmpy2.floor(enc.mid * (1 << 40)))
            lo = a_float - m / (1 << 40)
            ns = np.arange(1, a_max + 1, dtype=np.int64)
            head = ((ns * m) & ((1 << 40) - 1)) / float(1 << 40)
            arr = (head + ns * lo) % 1.0
            self._frac_cache[key] = arr
        return arr

    def member_mask(self, a_max, margin=_GUARD):
        """Boolean mask over a = 1..a_max, inflated outward by margin."""
        mask = np.ones(a_max, dtype=bool)
        for c, (u, ln) in enumerate(self.windows):
            fr = self.frac_array(a_max, c)
            mask &= (fr - u) % 1.0 < ln + margin
        return mask

    def first_anchor(self, offsets, a_max):
        k = len(offsets)
        arcs_per_coord = []
        for c, (u, ln) in enumerate(self.windows):
            arcs = [(u, ln)]
            for o in offsets:
                phi = self.frac(o, c) if o >= 1 else (-self.frac(-o, c)) % 1.0 if o <= -1 else 0.0
                arcs.append(((u - phi) % 1.0, ln))
            pieces = _arc_intersection_pieces(arcs, _GUARD)
            if not pieces:
                return None
            arcs_per_coord.append(pieces)
        # candidates from the first coordinate, then verify the rest
        fr0 = self.frac_array(a_max, 0)
        cand = np.zeros(a_max, dtype=bool)
        for u, ln in arcs_per_coord[0]:
            cand |= (fr0 - u) % 1.0 < ln
        for c in range(1, len(self.windows)):
            frc = self.frac_array(a_max, c)
            ok = np.zeros(a_max, dtype=bool)
            for u, ln in arcs_per_coord[c]:
                ok |= (frc - u) % 1.0 < ln
            cand &= ok
        lo = max(1, 1 - min(offsets, default=0))
        for idx in np.flatnonzero(cand):
            a = int(idx) + 1
            if a < lo:
                continue
            if self.contains(a) and all(self.contains(a + o) for o in offsets):
                return a
        return None


def _arc_intersection_pieces(arcs, inflate=0.0):
    """Intersection of [u, u+ln) arcs as a list of pieces, inflated outward."""
    arcs = [((u - inflate) % 1.0, min(1.0, ln + 2 * inflate)) for u, ln in arcs]
    if any(ln <= 0 for _, ln in arcs):
        return []
    proper = [(u, ln) for u, ln in arcs if ln < 1.0]
    if not proper:
        return [(0.0, 1.0)]
    pts = sorted({u for u, _ in proper} | {(u + ln) % 1.0 for u, ln in proper})
    pieces = []
    k = len(pts)
    for i in range(k):
        a = pts[i]
        b = pts[i + 1] if i + 1 < k else pts[0] + 1.0
        mid = ((a + b) / 2.0) % 1.0
        if all((mid - u) % 1.0 < ln for u, ln in proper):
            pieces.append((a % 1.0, b - a))
    return pieces


# ---------------------------------------------------------------------------
# pattern search


@dataclass
class PatternWitness:
    a: int
    n: int
    offsets: tuple

    def elements(self):
        return [self.a] + [self.a + o for o in self.offsets]

    def to_json(self):
        return {"a": self.a, "n": self.n, "offsets": list(self.offsets)}


@dataclass
class SearchResult:
    witness: PatternWitness | None
    n_min: int
    n_max: int
    a_max: int
    mode: str
    meta: dict = field(default_factory=dict)

    @property
    def found(self):
        return self.witness is not None

    def to_json(self):
        return {
            "found": self.found,
            "witness": self.witness.to_json() if self.witness else None,
            "searched": {"n_min": self.n_min, "n_max": self.n_max, "a_max": self.a_max},
            "mode": self.mode,
            **({"meta": self.meta} if self.meta else {}),
        }


def find_pattern(E, family, mode, n_max, a_max, n_min=1, digits=64,
                 offsets_fn=None):
    """First witness (n, a) in lexicographic order, or exhaustive None.

    offsets_fn(n) may override the certified [f_i(n)] computation (used by
    the shifted-family probe); by default offsets come from round_value.
    """
    mode = RoundingMode.parse(mode)
    germs = list(family)
    if offsets_fn is None:
        def offsets_fn(n):
            return tuple(round_value(f, n, mode, digits) for f in germs)
    for n in range(n_min, n_max + 1):
        offs = offsets_fn(n)
        a = E.first_anchor(offs, a_max)
        if a is not None:
            w = PatternWitness(a, n, tuple(offs))
            _verify_witness(E, w)
            return SearchResult(w, n_min, n_max, a_max, mode.value)
    return SearchResult(None, n_min, n_max, a_max, mode.value)


def _verify_witness(E, w):
    for x in w.elements():
        if not E.contains(x):
            raise AssertionError(f"witness element {x} not in the set")


def upper_density_estimate(E, grid):
    """|E cap [1, N]| / N at every grid point (exact counts)."""
    out = []
    for N in grid:
        N = int(N)
        out.append({"N": N, "count": E.count_upto(N), "density": E.count_upto(N) / N})
    return out


def return_set(sys, A, family, mode, N, digits=64):
    """{n <= N : mu(A cap inter T^-[f_i(n)] A) > 0} as an explicit set."""
    from .correlate import return_set_values

    _, flags = return_set_values(sys, A, family, mode, N, digits)
    return ExplicitSet.from_flags(flags, N)


def banach_density_probe(R, window_lengths, n_max=None):
    """max over M of |R cap [M, M+L)| / L for each requested window length."""
    if not isinstance(R, ExplicitSet):
        raise PreconditionError("Banach probe needs an explicit set")
    n_max = n_max or R.n_max
    flags = np.zeros(n_max + 1, dtype=np.int64)
    for n in R.members():
        if n <= n_max:
            flags[n] = 1
    csum = np.concatenate([[0], np.cumsum(flags)])
    out = {}
    for L in window_lengths:
        L = int(L)
        if L > n_max:
            out[L] = R.count_upto(n_max) / L
            continue
        windows = csum[L + 1 :] - csum[1 : n_max - L + 2]
        out[L] = float(np.max(windows)) / L
    return out


# ---------------------------------------------------------------------------
# shifted-family probe


def shifted_offsets_fn(family, shifts, mode, digits=64):
    """Offsets of the expanded family {f_i(n + j)} by direct evaluation."""
    mode = RoundingMode.parse(mode)
    germs = list(family)

    def offsets_fn(n):
        out = []
        for f in germs:
            for j in shifts:
                out.append(round_value(f, n + j, mode, digits))
        return tuple(out)

    return offsets_fn


def cor_a4_probe(family, ell, E, mode, n_max, a_max, n_min=1, digits=64):
    """Search for {a} + offsets of {f_i(n+j) : j = 0..ell}, exhaustively."""
    shifts = list(range(ell + 1))
    fn = shifted_offsets_fn(family, shifts, mode, digits)
    res = find_pattern(E, list(family), mode, n_max, a_max, n_min, digits,
                       offsets_fn=fn)
    res.meta["ell"] = ell
    res.meta["functions"] = len(list(family)) * (ell + 1)
    return res


def shifted_combination_value(terms, t, digits=96):
    """Evaluate sum coeff * f(t + shift) with certified error.

    terms: iterable of (germ, shift, rational coeff).  Returns (value,
    error_bound) as floats.
    """
    bits = digits_to_bits(digits)
    cd = gmpy2.context(precision=bits, round=gmpy2.RoundDown)
    cu = gmpy2.context(precision=bits, round=gmpy2.RoundUp)
    lo = gmpy2.mpfr(0)
    hi = gmpy2.mpfr(0)
    for germ, shift, coeff in terms:
        coeff = Fraction(coeff)
        enc, _ = germ.eval_enclosure(t + shift, bits)
        q = gmpy2.mpq(coeff.numerator, coeff.denominator)
        if coeff >= 0:
            lo = cd.add(lo, cd.mul(enc.lo, q))
            hi = cu.add(hi, cu.mul(enc.hi, q))
        else:
            lo = cd.add(lo, cd.mul(enc.hi, q))
            hi = cu.add(hi, cu.mul(enc.lo, q))
    mid = (lo + hi) / 2
    return float(mid), float(hi - lo)
