"""Symbolic algebra for a tractable class of Hardy-field germs.

A germ is a finite sum of terms ``a * t^c * prod_m log_m(t)^{r_m}`` where

* ``a`` is an exact :class:`~hardylab.constants.SymbolicReal`,
* the power ``c`` is an exact rational, optionally shifted by a declared
  irrational constant (``c = sym + offset``),
* ``log_m`` is the m-th iterate of the natural logarithm and the exponents
  ``r_m`` are exact rationals (any sign).

The class is closed under addition, scalar multiplication, multiplication
and differentiation, and every germ has a definite growth order decided by
the lexicographic signature ``(c, r_1, r_2, ...)``.  That makes growth
comparison, degree and characteristic vectors exact computations.

Note: the interchange JSON uses a single ``(log_depth, log_exp)`` pair per
term; internally a term may carry several log factors of distinct depths
because differentiation of iterated logs produces them.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2

from .constants import (
    ConstantRegistry,
    Enclosure,
    SymbolicReal,
    _as_fraction,
    digits_to_bits,
    get_context,
)
from .errors import HardyLabError, PrecisionExhaustedError

_PREC_CAP_BITS = digits_to_bits(512)

# power-part intervals (t^c and log factors) shared across germs
_POW_CACHE = {}


class DomainError(HardyLabError):
    """Evaluation outside the germ's domain (log iterate not positive)."""


# ---------------------------------------------------------------------------
# exponents


class Exponent:
    """Exact exponent of t: rational offset plus optional declared symbol."""

    __slots__ = ("sym", "off")

    def __init__(self, off=0, sym=None):
        self.off = _as_fraction(off)
        self.sym = sym

    @classmethod
    def of(cls, x):
        if isinstance(x, Exponent):
            return x
        return cls(_as_fraction(x))

    def is_rational(self):
        return self.sym is None

    def is_integer(self):
        return self.sym is None and self.off.denominator == 1

    def as_symreal(self):
        coords = {"1": self.off}
        if self.sym is not None:
            coords[self.sym] = coords.get(self.sym, Fraction(0)) + 1
        return SymbolicReal(coords)

    def shifted(self, q):
        return Exponent(self.off + _as_fraction(q), self.sym)

    def __eq__(self, other):
        return (
            isinstance(other, Exponent)
            and self.sym == other.sym
            and self.off == other.off
        )

    def __hash__(self):
        return hash((self.sym, self.off))

    def __repr__(self):
        if self.sym is None:
            return str(self.off)
        if self.off == 0:
            return self.sym
        return f"{self.sym}{'+' if self.off > 0 else ''}{self.off}"

    def to_json(self):
        if self.sym is None:
            return str(self.off)
        return {"symbol": self.sym, "offset": str(self.off)}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, dict):
            return cls(_as_fraction(obj.get("offset", 0)), obj["symbol"])
        return cls(_as_fraction(obj))


def exponent_sign(reg, e):
    """Certified sign of an exponent's value."""
    if e.sym is None:
        return -1 if e.off < 0 else (1 if e.off > 0 else 0)
    return reg.sign(e.as_symreal())


def exponent_cmp(reg, a, b):
    """-1/0/+1 ordering of two exponents; exact when structurally decidable."""
    if a.sym == b.sym:
        d = a.off - b.off
        return -1 if d < 0 else (1 if d > 0 else 0)
    return reg.sign((a.as_symreal()) - (b.as_symreal()))


# ---------------------------------------------------------------------------
# terms


class GermTerm:
    """One summand a * t^c * prod log_m(t)^{r_m}; logs keyed by depth."""

    __slots__ = ("coeff", "t_exp", "logs")

    def __init__(self, coeff, t_exp, logs=()):
        self.coeff = coeff
        self.t_exp = Exponent.of(t_exp)
        cleaned = tuple(
            sorted((int(d), _as_fraction(r)) for d, r in dict(logs).items() if r != 0)
        )
        for d, _ in cleaned:
            if d < 1:
                raise ValueError("log depth must be >= 1")
        self.logs = cleaned

    def scaled(self, q):
        return GermTerm(self.coeff.scale(q), self.t_exp, self.logs)

    def __repr__(self):
        bits = [f"({self.coeff})"]
        if not (self.t_exp.is_rational() and self.t_exp.off == 0):
            bits.append(f"t^({self.t_exp})")
        for d, r in self.logs:
            name = "log" if d == 1 else f"log_{d}"
            bits.append(f"{name}(t)^({r})" if r != 1 else f"{name}(t)")
        return "*".join(bits)


def _log_vector(logs, depth_max):
    v = [Fraction(0)] * depth_max
    for d, r in logs:
        if d <= depth_max:
            v[d - 1] = r
    return v


def signature_cmp(reg, t1, t2):
    """Growth order of two term signatures: -1 if t1 grows slower."""
    c = exponent_cmp(reg, t1.t_exp, t2.t_exp)
    if c != 0:
        return c
    dmax = max([d for d, _ in t1.logs] + [d for d, _ in t2.logs] + [0])
    v1 = _log_vector(t1.logs, dmax)
    v2 = _log_vector(t2.logs, dmax)
    for a, b in zip(v1, v2):
        if a != b:
            return -1 if a < b else 1
    return 0


def _sig_key(term):
    return (term.t_exp.sym, term.t_exp.off, term.logs)


# ---------------------------------------------------------------------------
# germs


class HardyExpr:
    """Normalized finite sum of germ terms, sorted by decreasing growth."""

    __slots__ = ("reg", "terms")

    def __init__(self, reg, terms=()):
        self.reg = reg
        merged = {}
        for t in terms:
            key = _sig_key(t)
            if key in merged:
                merged[key] = GermTerm(merged[key].coeff + t.coeff, t.t_exp, t.logs)
            else:
                merged[key] = t
        live = [t for t in merged.values() if not t.coeff.is_zero()]
        live.sort(key=_SigSortKey(reg), reverse=True)
        self.terms = tuple(live)

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, reg):
        return cls(reg, ())

    @classmethod
    def t_power(cls, reg, c, coeff=1):
        coeff = coeff if isinstance(coeff, SymbolicReal) else SymbolicReal.rational(coeff)
        return cls(reg, (GermTerm(coeff, c),))

    @classmethod
    def log_power(cls, reg, r=1, depth=1, coeff=1):
        coeff = coeff if isinstance(coeff, SymbolicReal) else SymbolicReal.rational(coeff)
        return cls(reg, (GermTerm(coeff, 0, {depth: r}),))

    @classmethod
    def polynomial(cls, reg, coeffs):
        """coeffs: iterable of (degree, SymbolicReal|rational)."""
        terms = []
        for deg, a in coeffs:
            a = a if isinstance(a, SymbolicReal) else SymbolicReal.rational(a)
            terms.append(GermTerm(a, deg))
        return cls(reg, terms)

    # -- algebra ---------------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        return HardyExpr(self.reg, self.terms + other.terms)

    def __sub__(self, other):
        self._check(other)
        return HardyExpr(self.reg, self.terms + tuple(t.scaled(-1) for t in other.terms))

    def __neg__(self):
        return HardyExpr(self.reg, tuple(t.scaled(-1) for t in self.terms))

    def scale(self, q):
        return HardyExpr(self.reg, tuple(t.scaled(q) for t in self.terms))

    def scale_sym(self, a):
        """Multiply by a SymbolicReal (needs declared products if irrational)."""
        out = []
        for t in self.terms:
            out.append(GermTerm(self.reg.mul(a, t.coeff), t.t_exp, t.logs))
        return HardyExpr(self.reg, out)

    def __mul__(self, other):
        self._check(other)
        out = []
        for t1 in self.terms:
            for t2 in other.terms:
                if t1.t_exp.sym is not None and t2.t_exp.sym is not None:
                    raise HardyLabError(
                        "product would need a sum of two symbolic exponents"
                    )
                sym = t1.t_exp.sym or t2.t_exp.sym
                exp = Exponent(t1.t_exp.off + t2.t_exp.off, sym)
                logs = dict(t1.logs)
                for d, r in t2.logs:
                    logs[d] = logs.get(d, Fraction(0)) + r
                out.append(GermTerm(self.reg.mul(t1.coeff, t2.coeff), exp, logs))
        return HardyExpr(self.reg, out)

    def _check(self, other):
        if self.reg is not other.reg:
            raise ValueError("germs belong to different constant registries")

    def is_zero(self):
        return not self.terms

    @property
    def leading(self):
        if not self.terms:
            raise ValueError("zero germ has no leading term")
        return self.terms[0]

    def __eq__(self, other):
        if not isinstance(other, HardyExpr):
            return NotImplemented
        return self.reg is other.reg and [
            (_sig_key(t), t.coeff) for t in self.terms
        ] == [(_sig_key(t), t.coeff) for t in other.terms]

    def __hash__(self):
        return hash(tuple((_sig_key(t), t.coeff) for t in self.terms))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(repr(t) for t in self.terms)

    # -- calculus -----------------------------------------------------------

    def derivative(self):
        """Term-wise derivative; exact and closed in the term class."""
        out = []
        for t in self.terms:
            c = t.t_exp
            # power part: a*c * t^(c-1) * logs
            c_val = c.as_symreal()
            if not c_val.is_zero():
                coeff = (
                    t.coeff.scale(c.off)
                    if c.sym is None
                    else self.reg.mul(t.coeff, c_val)
                )
                out.append(GermTerm(coeff, c.shifted(-1), t.logs))
            # each log factor: a*r_m * t^(c-1) * log_m^{r_m-1} * prod_{j<m} log_j^{-1} * rest
            for d, r in t.logs:
                logs = dict(t.logs)
                logs[d] = r - 1
                for j in range(1, d):
                    logs[j] = logs.get(j, Fraction(0)) - 1
                out.append(GermTerm(t.coeff.scale(r), c.shifted(-1), logs))
        return HardyExpr(self.reg, out)

    def derivatives(self, order):
        f = self
        for _ in range(order):
            f = f.derivative()
        return f

    # -- term classification --------------------------------------------------

    def term_growth(self, term):
        """-1 decaying, 0 asymptotically constant, +1 unbounded."""
        s = exponent_sign(self.reg, term.t_exp)
        if s != 0:
            return s
        for _, r in sorted(term.logs):
            if r != 0:
                return 1 if r > 0 else -1
        return 0

    @staticmethod
    def term_is_polynomial(term):
        return term.t_exp.is_integer() and term.t_exp.off >= 0 and not term.logs

    def polynomial_part(self):
        """Exact polynomial summand, as {degree: SymbolicReal}."""
        out = {}
        for t in self.terms:
            if self.term_is_polynomial(t):
                out[int(t.t_exp.off)] = t.coeff
        return out

    def split_parts(self):
        """(polynomial terms, unbounded non-polynomial terms, bounded rest)."""
        poly, unb, rest = [], [], []
        for t in self.terms:
            if self.term_is_polynomial(t):
                poly.append(t)
            elif self.term_growth(t) > 0:
                unb.append(t)
            else:
                rest.append(t)
        return poly, unb, rest

    def decays(self):
        return all(self.term_growth(t) < 0 for t in self.terms)

    def is_bounded(self):
        return all(self.term_growth(t) <= 0 for t in self.terms)

    # -- shifting ---------------------------------------------------------------

    def shift_expand(self, j, order):
        """Expand t -> t+j as a germ plus certified Taylor remainder bounds.

        Only log-free terms are supported (binomial series in j/t).  Returns
        ``(germ, bounds)`` where bounds is a list of (B, e) pairs such that
        |f(t+j) - germ(t)| <= sum B * t^float(e) for all t >= max(2, j).
        """
        j = int(j)
        if j < 0:
            raise ValueError("shift must be a non-negative integer")
        if j == 0:
            return self, []
        out = []
        bounds = []
        for t in self.terms:
            if t.logs:
                raise HardyLabError(
                    "shift expansion is only certified for log-free terms"
                )
            c = t.t_exp
            c_sym = c.as_symreal()
            binom = SymbolicReal.rational(1)  # falling(c,nu)/nu!
            truncated = True
            for nu in range(order + 1):
                if nu > 0:
                    factor = c_sym - SymbolicReal.rational(nu - 1)
                    binom = self.reg.mul(binom, factor).scale(Fraction(1, nu))
                    if binom.is_zero():
                        truncated = False
                        break
                coeff = self.reg.mul(t.coeff, binom).scale(Fraction(j) ** nu)
                out.append(GermTerm(coeff, c.shifted(-nu)))
            if truncated:
                # Lagrange remainder: |C(c,L+1)| j^(L+1) max_{xi in [t,t+j]} xi^(c-L-1)
                nu = order + 1
                factor = c_sym - SymbolicReal.rational(nu - 1)
                binom_next = self.reg.mul(binom, factor).scale(Fraction(1, nu))
                b = self._abs_upper(binom_next) * self._abs_upper(t.coeff) * float(j) ** nu
                e = c.shifted(-nu)
                if exponent_sign(self.reg, e) > 0:
                    # maximum at xi = t+j <= 2t; cover the (1+j/t)^e factor
                    b *= 2.0 ** (float(self.reg.float_value(e.as_symreal())) + 1)
                bounds.append((b, e))
        return HardyExpr(self.reg, out), bounds

    def _abs_upper(self, x):
        enc = self.reg.value_enclosure(x, 96)
        return max(abs(float(enc.lo)), abs(float(enc.hi))) * (1 + 1e-12)

    # -- evaluation ----------------------------------------------------------

    def eval_enclosure(self, t, prec_bits):
        """Certified enclosure of f(t) for exact rational t >= 1.

        Returns (Enclosure, exact) where exact means the enclosure is a
        point computed by exact rational arithmetic.
        """
        t = _as_fraction(t)
        if t < 1:
            raise DomainError("evaluation requires t >= 1")
        from .constants import note_precision

        note_precision(prec_bits)
        exact_sum = Fraction(0)
        pending = []
        for term in self.terms:
            ex = self._term_exact(term, t)
            if ex is not None:
                exact_sum += ex
            else:
                pending.append(term)
        cd = get_context(prec_bits, "d")
        cu = get_context(prec_bits, "u")
        q = gmpy2.mpq(exact_sum.numerator, exact_sum.denominator)
        lo = cd.add(gmpy2.mpfr(0), q)
        hi = cu.add(gmpy2.mpfr(0), q)
        if not pending:
            return Enclosure(lo, hi), True
        tq = gmpy2.mpq(t.numerator, t.denominator)
        t_lo = cd.add(gmpy2.mpfr(0), tq)
        t_hi = cu.add(gmpy2.mpfr(0), tq)
        for term in pending:
            tl, th = self._term_enclosure(term, t_lo, t_hi, cd, cu, prec_bits, t)
            lo = cd.add(lo, tl)
            hi = cu.add(hi, th)
        if not (gmpy2.is_finite(lo) and gmpy2.is_finite(hi)):
            raise DomainError(f"germ not finite at t={t}")
        return Enclosure(lo, hi), False

    def _term_exact(self, term, t):
        """Exact Fraction value of a term, or None if not exactly computable."""
        if term.logs or not term.coeff.is_rational() or not term.t_exp.is_rational():
            return None
        c = term.t_exp.off
        p, q = c.numerator, c.denominator
        num, den = t.numerator, t.denominator
        if q == 1:
            power = Fraction(num, den) ** p
        else:
            rn, okn = gmpy2.iroot(gmpy2.mpz(num) ** abs(p), q)
            rd, okd = gmpy2.iroot(gmpy2.mpz(den) ** abs(p), q)
            if not (okn and okd):
                return None
            power = Fraction(int(rn), int(rd))
            if p < 0:
                power = 1 / power
        return term.coeff.rational_value() * power

    def _term_enclosure(self, term, t_lo, t_hi, cd, cu, prec_bits, t_key):
        coeff = self.reg.value_enclosure(term.coeff, prec_bits)
        key = (id(self.reg), term.t_exp.sym, term.t_exp.off, term.logs, t_key, prec_bits)
        val = _POW_CACHE.get(key)
        if val is None:
            val = _iv_pow_exponent(self.reg, t_lo, t_hi, term.t_exp, cd, cu, prec_bits)
            for depth, r in term.logs:
                lg_lo, lg_hi = t_lo, t_hi
                for _ in range(depth):
                    if lg_hi <= 0:
                        raise DomainError("log iterate not positive at this t")
                    lg_lo, lg_hi = cd.log(lg_lo), cu.log(lg_hi)
                if lg_hi <= 0 or (r < 0 and lg_lo <= 0):
                    raise DomainError("log iterate not positive at this t")
                pw = _iv_pow_rational(lg_lo, lg_hi, r, cd, cu)
                val = _iv_mul(val, pw, cd, cu)
            if len(_POW_CACHE) > (1 << 19):
                _POW_CACHE.clear()
            _POW_CACHE[key] = val
        return _iv_mul((coeff.lo, coeff.hi), val, cd, cu)

    def eval(self, t, digits=64):
        """Value enclosure and exactness flag at t (spec-facing wrapper)."""
        return self.eval_enclosure(t, digits_to_bits(digits))

    def float_at(self, t, digits=64):
        enc, _ = self.eval_enclosure(t, digits_to_bits(digits))
        return float(enc.mid)

    def frac_at(self, t, digits=64):
        """Certified fractional part of f(t), as a float in [0, 1)."""
        bits = digits_to_bits(digits)
        while True:
            enc, exact = self.eval_enclosure(t, bits)
            cd = gmpy2.context(precision=bits, round=gmpy2.RoundDown)
            fl = cd.floor(enc.lo)
            fh = cd.floor(enc.hi)
            if fl == fh:
                return float(enc.mid - fl)
            if exact:
                return float(enc.lo - fl)
            bits *= 2
            if bits > _PREC_CAP_BITS:
                raise PrecisionExhaustedError(
                    f"fractional part of value at t={t} straddles an integer"
                )

    # -- (de)serialization -----------------------------------------------------

    def to_json(self):
        out = []
        for t in self.terms:
            obj = {"coeff": t.coeff.to_json(), "t_exp": t.t_exp.to_json()}
            if len(t.logs) == 1:
                d, r = t.logs[0]
                obj["log_depth"] = d
                obj["log_exp"] = str(r)
            elif len(t.logs) > 1:
                obj["logs"] = {str(d): str(r) for d, r in t.logs}
            out.append(obj)
        return out

    @classmethod
    def from_json(cls, reg, arr):
        terms = []
        for obj in arr:
            coeff = SymbolicReal.from_json(obj["coeff"])
            t_exp = Exponent.from_json(obj.get("t_exp", "0"))
            if "logs" in obj:
                logs = {int(d): _as_fraction(r) for d, r in obj["logs"].items()}
            else:
                r = _as_fraction(obj.get("log_exp", 0))
                d = int(obj.get("log_depth", 1) or 1)
                logs = {d: r} if r != 0 else {}
            terms.append(GermTerm(coeff, t_exp, logs))
        return cls(reg, terms)


class _SigSortKey:
    """functools.cmp_to_key equivalent bound to a registry."""

    def __init__(self, reg):
        self.reg = reg

    def __call__(self, term):
        return _SigWrapped(self.reg, term)


class _SigWrapped:
    __slots__ = ("reg", "term")

    def __init__(self, reg, term):
        self.reg = reg
        self.term = term

    def __lt__(self, other):
        return signature_cmp(self.reg, self.term, other.term) < 0

    def __eq__(self, other):
        return signature_cmp(self.reg, self.term, other.term) == 0


# ---------------------------------------------------------------------------
# growth comparison API


class GrowthComparison:
    """Result of comparing growth of two germs."""

    __slots__ = ("kind", "ratio")

    def __init__(self, kind, ratio=None):
        self.kind = kind  # "precedes" | "dominates" | "same_order"
        self.ratio = ratio

    def __repr__(self):
        if self.kind == "same_order":
            return f"SameOrder({self.ratio})"
        return self.kind.capitalize()

    def __eq__(self, other):
        return (
            isinstance(other, GrowthComparison)
            and self.kind == other.kind
            and self.ratio == other.ratio
        )


def compare(f, g):
    """Growth order of |f| vs |g|: f precedes g when g/f -> infinity.

    For germs of the same order the exact limit ratio lim f/g is attached
    when it is expressible in the declared basis (None otherwise).
    """
    if f.is_zero() or g.is_zero():
        raise ValueError("compare requires nonzero germs")
    c = signature_cmp(f.reg, f.leading, g.leading)
    if c < 0:
        return GrowthComparison("precedes")
    if c > 0:
        return GrowthComparison("dominates")
    a, b = f.leading.coeff, g.leading.coeff
    if a == b:
        return GrowthComparison("same_order", SymbolicReal.rational(1))
    try:
        ratio = f.reg.div(a, b)
    except HardyLabError:
        ratio = None
    return GrowthComparison("same_order", ratio)


def same_growth_one(f, g):
    """True iff lim f/g = 1 (the asymptotic-equality equivalence)."""
    if f.is_zero() or g.is_zero():
        return False
    if signature_cmp(f.reg, f.leading, g.leading) != 0:
        return False
    return f.leading.coeff == g.leading.coeff


def degree(f):
    """Smallest positive integer d with |f(t)| << t^d (1 for bounded germs)."""
    if f.is_zero():
        raise ValueError("zero germ has no degree")
    lead = f.leading
    c = lead.t_exp
    if c.sym is None:
        if c.off <= 0:
            return 1
        if c.off.denominator == 1:
            d = int(c.off)
            # log factors push above t^d iff the first nonzero one is positive
            for _, r in sorted(lead.logs):
                if r > 0:
                    return max(d + 1, 1)
                if r < 0:
                    break
            return max(d, 1)
        return max(-(-c.off.numerator // c.off.denominator), 1)  # ceil
    # symbolic exponent: never an integer by declaration, so ceil(value)
    enc = f.reg.value_enclosure(c.as_symreal(), 128)
    lo, hi = gmpy2.floor(enc.lo), gmpy2.floor(enc.hi)
    if lo != hi:
        raise PrecisionExhaustedError("symbolic exponent too close to an integer")
    return max(int(lo) + 1, 1)


def characteristic_vector(family):
    """Counts of ~-classes per degree, as a tuple (m_1, ..., m_dmax)."""
    fams = [f for f in family]
    if not fams:
        return ()
    degs = [degree(f) for f in fams]
    dmax = max(degs)
    counts = [0] * dmax
    for d in range(1, dmax + 1):
        members = [f for f, dg in zip(fams, degs) if dg == d]
        classes = []
        for f in members:
            if not any(same_growth_one(f, g) for g in classes):
                classes.append(f)
        counts[d - 1] = len(classes)
    return tuple(counts)


def log_growth(f):
    """Germ with log|f(t)| - log_growth(t) bounded; needs |f| unbounded.

    For a leading term a*t^c*prod log_m^r this is c*log t + sum r*log_{m+1} t
    (additive constants dropped; only the growth class is meaningful).
    """
    if f.is_zero():
        raise ValueError("zero germ")
    lead = f.leading
    terms = []
    c_val = lead.t_exp.as_symreal()
    if not c_val.is_zero():
        terms.append(GermTerm(c_val, 0, {1: Fraction(1)}))
    for d, r in lead.logs:
        terms.append(GermTerm(SymbolicReal.rational(r), 0, {d + 1: Fraction(1)}))
    g = HardyExpr(f.reg, terms)
    if g.is_zero():
        raise ValueError("log growth of an asymptotically constant germ")
    return g


# ---------------------------------------------------------------------------
# families


class Family:
    """Named germs over one shared registry; the JSON interchange unit."""

    def __init__(self, reg, functions):
        self.reg = reg
        self.functions = dict(functions)

    def __iter__(self):
        return iter(self.functions.values())

    def __len__(self):
        return len(self.functions)

    def names(self):
        return list(self.functions)

    def germs(self):
        return list(self.functions.values())

    def to_json(self):
        out = self.reg.to_json()
        out["functions"] = [
            {"name": name, "terms": f.to_json()} for name, f in self.functions.items()
        ]
        return out

    @classmethod
    def from_json(cls, obj):
        reg = ConstantRegistry.from_json(obj)
        funcs = {}
        for i, fo in enumerate(obj.get("functions", [])):
            name = fo.get("name", f"f{i + 1}")
            funcs[name] = HardyExpr.from_json(reg, fo["terms"])
        return cls(reg, funcs)


# ---------------------------------------------------------------------------
# interval helpers (directed rounding on mpfr endpoints)


def _iv_mul(a, b, cd, cu):
    al, ah = a
    bl, bh = b
    lo = min(cd.mul(al, bl), cd.mul(al, bh), cd.mul(ah, bl), cd.mul(ah, bh))
    hi = max(cu.mul(al, bl), cu.mul(al, bh), cu.mul(ah, bl), cu.mul(ah, bh))
    return (lo, hi)


def _iv_pow_rational(x_lo, x_hi, r, cd, cu):
    """[x_lo, x_hi]^r for positive interval and exact rational r."""
    if r == 0:
        one = gmpy2.mpfr(1)
        return (one, one)
    rq = gmpy2.mpq(r.numerator, r.denominator)
    if r > 0:
        lo = cd.exp(cd.mul(cd.log(x_lo), rq))
        hi = cu.exp(cu.mul(cu.log(x_hi), rq))
    else:
        lo = cd.exp(cd.mul(cu.log(x_hi), rq))
        hi = cu.exp(cu.mul(cd.log(x_lo), rq))
    return (lo, hi)


def _iv_pow_exponent(reg, x_lo, x_hi, e, cd, cu, prec_bits):
    """[x_lo, x_hi]^e for positive interval; exponent may carry a symbol."""
    if e.sym is None:
        return _iv_pow_rational(x_lo, x_hi, e.off, cd, cu)
    enc = reg.value_enclosure(e.as_symreal(), prec_bits)
    ll = cd.log(x_lo)
    lh = cu.log(x_hi)
    # x >= 2 so log x > 0; min/max over exponent interval endpoints
    prods_lo = [cd.mul(ll, enc.lo), cd.mul(ll, enc.hi), cd.mul(lh, enc.lo), cd.mul(lh, enc.hi)]
    prods_hi = [cu.mul(ll, enc.lo), cu.mul(ll, enc.hi), cu.mul(lh, enc.lo), cu.mul(lh, enc.hi)]
    return (cd.exp(min(prods_lo)), cu.exp(max(prods_hi)))
