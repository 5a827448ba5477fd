"""Exact real constants and rational-vector arithmetic over a declared basis.

A :class:`ConstantRegistry` holds a finite set of real constants assumed
Q-linearly independent (the symbol ``"1"`` is always present).  A
:class:`SymbolicReal` is a rational coordinate vector over that basis, so
addition, subtraction, rational scaling and the zero test are exact.
Products of two basis symbols are only available when declared in the
registry's product table; with a complete table (e.g. the quadratic-surd
registries built by :func:`quadratic_surd_registry`) the coordinate space
is a genuine number field and division works too.

Numeric values are served as certified enclosures at any requested
precision: constants declared by an exact rule (rational, sqrt of a
rational) re-evaluate at full precision, while constants declared by a
decimal string are only known up to the string's last digit.
"""

from __future__ import annotations

import math
from fractions import Fraction

import gmpy2

from .errors import BasisClosureError, PrecisionExhaustedError

_BITS_PER_DIGIT = 3.3219280948873626


def digits_to_bits(digits):
    return int(digits * _BITS_PER_DIGIT) + 16


_CTX_CACHE = {}

# high-water mark of working precision, reported in run metadata
_PREC_HIGH_WATER = [0]


def note_precision(prec_bits):
    if prec_bits > _PREC_HIGH_WATER[0]:
        _PREC_HIGH_WATER[0] = prec_bits


def precision_high_water_digits():
    return int(_PREC_HIGH_WATER[0] / _BITS_PER_DIGIT)


def reset_precision_high_water():
    _PREC_HIGH_WATER[0] = 0


def get_context(prec_bits, direction="n"):
    """Cached gmpy2 contexts; direction 'd' rounds down, 'u' up, 'n' nearest."""
    key = (prec_bits, direction)
    ctx = _CTX_CACHE.get(key)
    if ctx is None:
        rnd = {"d": gmpy2.RoundDown, "u": gmpy2.RoundUp, "n": gmpy2.RoundToNearest}[
            direction
        ]
        ctx = gmpy2.context(precision=prec_bits, round=rnd)
        _CTX_CACHE[key] = ctx
    return ctx


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float, str)):
        # floats convert exactly (every float is a dyadic rational)
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class Enclosure:
    """A closed interval [lo, hi] of mpfr values enclosing a real number."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        if lo > hi:
            raise ValueError("empty enclosure")
        self.lo = lo
        self.hi = hi

    def _ctx(self):
        prec = max(getattr(self.lo, "precision", 53), getattr(self.hi, "precision", 53))
        return get_context(prec + 8, "n")

    @property
    def mid(self):
        ctx = self._ctx()
        return ctx.div(ctx.add(self.lo, self.hi), 2)

    @property
    def radius(self):
        return self._ctx().sub(self.hi, self.lo)

    def __repr__(self):
        return f"Enclosure({self.lo!r}, {self.hi!r})"


class ConstValue:
    """How a declared constant's numeric value is obtained.

    kind "rational": exact at any precision.
    kind "sqrt":     square root of a positive rational, exact rule.
    kind "decimal":  literal decimal string; certainty capped at its length.
    """

    def __init__(self, kind, data):
        self.kind = kind
        self.data = data

    @classmethod
    def parse(cls, spec):
        if isinstance(spec, dict):
            if "sqrt" in spec:
                r = _as_fraction(spec["sqrt"])
                if r <= 0:
                    raise ValueError("sqrt argument must be positive")
                return cls("sqrt", r)
            if "rational" in spec:
                return cls("rational", _as_fraction(spec["rational"]))
            raise ValueError(f"unknown constant value spec: {spec!r}")
        if isinstance(spec, (int, Fraction)):
            return cls("rational", _as_fraction(spec))
        if isinstance(spec, str):
            if "/" in spec or spec.lstrip("+-").isdigit():
                return cls("rational", Fraction(spec))
            return cls("decimal", spec)
        raise ValueError(f"unknown constant value spec: {spec!r}")

    def to_json(self):
        if self.kind == "sqrt":
            return {"sqrt": str(self.data)}
        if self.kind == "rational":
            return str(self.data)
        return self.data

    def enclosure(self, prec_bits):
        cd = gmpy2.context(precision=prec_bits, round=gmpy2.RoundDown)
        cu = gmpy2.context(precision=prec_bits, round=gmpy2.RoundUp)
        if self.kind == "rational":
            q = gmpy2.mpq(self.data.numerator, self.data.denominator)
            return Enclosure(cd.add(gmpy2.mpfr(0), q), cu.add(gmpy2.mpfr(0), q))
        if self.kind == "sqrt":
            q = gmpy2.mpq(self.data.numerator, self.data.denominator)
            lo = cd.sqrt(cd.add(gmpy2.mpfr(0), q))
            hi = cu.sqrt(cu.add(gmpy2.mpfr(0), q))
            return Enclosure(lo, hi)
        # Decimal string: the true value is within one unit of the last digit.
        s = self.data
        digits = len(s.split(".")[1]) if "." in s else 0
        if prec_bits > digits_to_bits(max(digits, 1)):
            raise PrecisionExhaustedError(
                f"constant declared with {digits} decimal digits cannot serve "
                f"{prec_bits} bits"
            )
        v = gmpy2.mpfr(s, prec_bits + 16)
        ulp = gmpy2.mpfr(f"2e-{digits}", 64)
        return Enclosure(cd.sub(v, ulp), cu.add(v, ulp))


class SymbolicReal:
    """Exact rational vector over the registry's constant basis."""

    __slots__ = ("coords",)

    def __init__(self, coords=None):
        cleaned = {}
        if coords:
            for sym, q in coords.items():
                q = _as_fraction(q)
                if q != 0:
                    cleaned[sym] = q
        self.coords = cleaned

    @classmethod
    def rational(cls, q):
        return cls({"1": _as_fraction(q)})

    @classmethod
    def symbol(cls, name, weight=1):
        return cls({name: _as_fraction(weight)})

    def is_zero(self):
        return not self.coords

    def is_rational(self):
        return all(sym == "1" for sym in self.coords)

    def rational_value(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords.get("1", Fraction(0))

    def __add__(self, other):
        out = dict(self.coords)
        for sym, q in other.coords.items():
            out[sym] = out.get(sym, Fraction(0)) + q
        return SymbolicReal(out)

    def __sub__(self, other):
        out = dict(self.coords)
        for sym, q in other.coords.items():
            out[sym] = out.get(sym, Fraction(0)) - q
        return SymbolicReal(out)

    def __neg__(self):
        return SymbolicReal({s: -q for s, q in self.coords.items()})

    def scale(self, q):
        q = _as_fraction(q)
        if q == 0:
            return SymbolicReal()
        return SymbolicReal({s: c * q for s, c in self.coords.items()})

    def __eq__(self, other):
        if isinstance(other, SymbolicReal):
            return self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coords.items()))

    def key(self):
        return tuple(sorted(self.coords.items()))

    def __repr__(self):
        if not self.coords:
            return "0"
        parts = []
        for sym in sorted(self.coords):
            q = self.coords[sym]
            parts.append(str(q) if sym == "1" else f"{q}*{sym}")
        return " + ".join(parts)

    def to_json(self):
        return {sym: str(q) for sym, q in sorted(self.coords.items())}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, (int, str)):
            return cls.rational(_as_fraction(obj))
        return cls({sym: _as_fraction(q) for sym, q in obj.items()})


ZERO = SymbolicReal()
ONE = SymbolicReal.rational(1)


class ConstantRegistry:
    """Declared constant basis, optional product table, enclosure cache."""

    def __init__(self):
        self._values = {"1": ConstValue("rational", Fraction(1))}
        self._independent = {"1": True}
        self._products = {}
        self._cache = {}
        self._vec_cache = {}

    # -- declarations ------------------------------------------------------

    def declare(self, name, value, independent=True):
        if name in self._values and name != "1":
            raise ValueError(f"constant {name!r} already declared")
        if not name or "*" in name:
            raise ValueError(f"bad constant name {name!r}")
        self._values[name] = ConstValue.parse(value)
        self._independent[name] = bool(independent)
        return self

    def declare_product(self, a, b, result):
        """Declare a * b = result (a SymbolicReal over this basis)."""
        for sym in (a, b):
            if sym not in self._values:
                raise ValueError(f"unknown constant {sym!r}")
        if not isinstance(result, SymbolicReal):
            result = SymbolicReal.from_json(result)
        self._products[frozenset((a, b)) if a != b else frozenset((a,))] = result
        return self

    @property
    def symbols(self):
        return sorted(self._values)

    def has_symbol(self, name):
        return name in self._values

    def value_spec(self, name):
        return self._values[name]

    # -- numerics ----------------------------------------------------------

    def enclosure(self, name, prec_bits):
        key = (name, prec_bits)
        enc = self._cache.get(key)
        if enc is None:
            enc = self._values[name].enclosure(prec_bits)
            self._cache[key] = enc
        return enc

    def value_enclosure(self, x, prec_bits):
        """Certified enclosure of a SymbolicReal at the given precision."""
        key = (x.key(), prec_bits)
        hit = self._vec_cache.get(key)
        if hit is not None:
            return hit
        cd = get_context(prec_bits, "d")
        cu = get_context(prec_bits, "u")
        lo = gmpy2.mpfr(0)
        hi = gmpy2.mpfr(0)
        for sym, q in x.coords.items():
            enc = self.enclosure(sym, prec_bits)
            qf = gmpy2.mpq(q.numerator, q.denominator)
            if q >= 0:
                lo = cd.add(lo, cd.mul(enc.lo, qf))
                hi = cu.add(hi, cu.mul(enc.hi, qf))
            else:
                lo = cd.add(lo, cd.mul(enc.hi, qf))
                hi = cu.add(hi, cu.mul(enc.lo, qf))
        out = Enclosure(lo, hi)
        if len(self._vec_cache) > (1 << 16):
            self._vec_cache.clear()
        self._vec_cache[key] = out
        return out

    def float_value(self, x):
        return float(self.value_enclosure(x, 96).mid)

    def sign(self, x, max_bits=4096):
        """Certified sign of a SymbolicReal (exact 0 via coordinates)."""
        if x.is_zero():
            return 0
        if x.is_rational():
            q = x.rational_value()
            return -1 if q < 0 else 1
        bits = 128
        while bits <= max_bits:
            enc = self.value_enclosure(x, bits)
            if enc.lo > 0:
                return 1
            if enc.hi < 0:
                return -1
            bits *= 2
        raise PrecisionExhaustedError(
            f"cannot determine sign of {x}; value numerically indistinguishable "
            "from 0 (declare the dependency instead)"
        )

    # -- exact products ----------------------------------------------------

    def _symbol_product(self, a, b):
        if a == "1":
            return SymbolicReal.symbol(b)
        if b == "1":
            return SymbolicReal.symbol(a)
        key = frozenset((a, b)) if a != b else frozenset((a,))
        prod = self._products.get(key)
        if prod is None:
            raise BasisClosureError(f"product {a}*{b} not declared")
        return prod

    def mul(self, x, y):
        if not isinstance(x, SymbolicReal) or not isinstance(y, SymbolicReal):
            raise TypeError("mul expects SymbolicReal operands")
        out = SymbolicReal()
        for sa, qa in x.coords.items():
            for sb, qb in y.coords.items():
                out = out + self._symbol_product(sa, sb).scale(qa * qb)
        return out

    def try_mul(self, x, y):
        try:
            return self.mul(x, y)
        except BasisClosureError:
            return None

    def div(self, num, den):
        """Solve den * x = num exactly; BasisClosureError if not possible."""
        if den.is_zero():
            raise ZeroDivisionError("division by exact zero")
        if den.is_rational():
            return num.scale(1 / den.rational_value())
        syms = self.symbols
        cols = []
        for s in syms:
            cols.append(self.mul(den, SymbolicReal.symbol(s)))
        # Rational linear system: sum_s x_s * cols[s] = num, coordinatewise.
        rows = []
        rhs = []
        for tau in syms:
            rows.append([c.coords.get(tau, Fraction(0)) for c in cols])
            rhs.append(num.coords.get(tau, Fraction(0)))
        sol = _solve_rational(rows, rhs)
        if sol is None:
            raise BasisClosureError(f"cannot divide {num} by {den} in this basis")
        return SymbolicReal({s: q for s, q in zip(syms, sol)})

    def has_complete_products(self):
        """True if every pair of non-1 symbols has a declared product."""
        syms = [s for s in self.symbols if s != "1"]
        for i, a in enumerate(syms):
            for b in syms[i:]:
                key = frozenset((a, b)) if a != b else frozenset((a,))
                if key not in self._products:
                    return False
        return True

    # -- (de)serialization ---------------------------------------------------

    def to_json(self):
        consts = []
        for name in self.symbols:
            if name == "1":
                continue
            consts.append(
                {
                    "name": name,
                    "value": self._values[name].to_json(),
                    "independent": self._independent[name],
                }
            )
        prods = {}
        for key, result in sorted(self._products.items(), key=lambda kv: sorted(kv[0])):
            syms = sorted(key)
            a, b = (syms[0], syms[0]) if len(syms) == 1 else syms
            prods[f"{a}*{b}"] = result.to_json()
        out = {"constants": consts}
        if prods:
            out["products"] = prods
        return out

    @classmethod
    def from_json(cls, obj):
        reg = cls()
        for c in obj.get("constants", []):
            reg.declare(c["name"], c["value"], c.get("independent", True))
        for key, result in obj.get("products", {}).items():
            a, _, b = key.partition("*")
            reg.declare_product(a, b, SymbolicReal.from_json(result))
        return reg


def _solve_rational(rows, rhs):
    """Solve a square rational system by Gaussian elimination; None if singular."""
    n = len(rows)
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            # Column is free; system is solvable only if consistent with x=0 there.
            continue
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    sol = [Fraction(0)] * n
    for col in range(n):
        if a[col][col] == 1:
            sol[col] = a[col][n]
    # verify (handles singular/inconsistent cases)
    for i in range(n):
        acc = sum((rows[i][j] * sol[j] for j in range(n)), Fraction(0))
        if acc != rhs[i]:
            return None
    return sol


def quadratic_surd_registry(*radicands, names=None):
    """Registry for Q(sqrt(d1), sqrt(d2), ...) with a complete product table.

    Radicands must be squarefree positive integers > 1 and pairwise coprime,
    so the surds (and their pairwise products) are Q-independent.  Products
    of two generators introduce the combined surd sqrt(d_i * d_j), which is
    declared automatically.
    """
    rads = list(radicands)
    if names is None:
        names = [f"sqrt{d}" for d in rads]
    reg = ConstantRegistry()
    declared = {}
    for name, d in zip(names, rads):
        reg.declare(name, {"sqrt": d})
        declared[d] = name
    if len(rads) == 2:
        d1, d2 = rads
        combo = d1 * d2
        combo_name = f"sqrt{combo}"
        reg.declare(combo_name, {"sqrt": combo})
        declared[combo] = combo_name
    syms = list(declared.items())
    for i, (da, na) in enumerate(syms):
        for db, nb in syms[i:]:
            if na == nb:
                reg.declare_product(na, na, SymbolicReal.rational(da))
                continue
            g = math.gcd(da, db)
            rest = (da // g) * (db // g)
            if rest == 1:
                reg.declare_product(na, nb, SymbolicReal.rational(g))
            elif rest in declared:
                reg.declare_product(na, nb, SymbolicReal.symbol(declared[rest], g))
    return reg
