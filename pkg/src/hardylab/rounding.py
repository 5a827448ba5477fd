"""Certified integer rounding of Hardy-germ values.

``round_value`` returns the exact floor / ceiling / nearest integer of
f(n), certified by the evaluation enclosure.  When the enclosure straddles
the rounding boundary the precision is doubled up to a cap; values that
are exactly on a boundary (or cannot be separated from it within the cap)
raise :class:`UncertifiableRoundingError` instead of being rounded
silently.  Nearest follows the convention [x] = floor(x + 1/2),
i.e. half-integers round up.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction

import gmpy2

from .constants import digits_to_bits
from .errors import UncertifiableRoundingError

DEFAULT_DIGITS = 64
ESCALATION_CAP_DIGITS = 512


class RoundingMode(Enum):
    FLOOR = "floor"
    CEIL = "ceil"
    NEAREST = "nearest"

    @classmethod
    def parse(cls, s):
        if isinstance(s, cls):
            return s
        return cls(str(s).lower())


def round_rational(q, mode):
    """Exact rounding of a Fraction (reference semantics for the modes)."""
    q = Fraction(q)
    if mode is RoundingMode.FLOOR:
        return q.numerator // q.denominator
    if mode is RoundingMode.CEIL:
        return -((-q.numerator) // q.denominator)
    return (2 * q.numerator + q.denominator) // (2 * q.denominator)


def round_value(f, n, mode=RoundingMode.NEAREST, digits=DEFAULT_DIGITS,
                cap_digits=ESCALATION_CAP_DIGITS):
    """Certified [f(n)] / floor / ceil as an exact Python integer."""
    mode = RoundingMode.parse(mode)
    bits = digits_to_bits(digits)
    cap = digits_to_bits(cap_digits)
    while True:
        try:
            enc, exact = f.eval_enclosure(n, bits)
        except UncertifiableRoundingError:
            raise
        except Exception as e:
            from .errors import PrecisionExhaustedError

            if isinstance(e, PrecisionExhaustedError):
                # cannot escalate (e.g. a decimal-declared constant ran out
                # of digits) while the boundary is still unresolved
                raise UncertifiableRoundingError(
                    f"{mode.value} of f({n}) cannot be certified: {e}"
                ) from e
            raise
        if exact:
            # enclosure endpoints bracket one exact rational; recompute exactly
            q = _exact_fraction(f, n)
            return round_rational(q, mode)
        ctx = gmpy2.context(precision=bits, round=gmpy2.RoundDown)
        if mode is RoundingMode.FLOOR:
            lo, hi = ctx.floor(enc.lo), ctx.floor(enc.hi)
        elif mode is RoundingMode.CEIL:
            lo, hi = ctx.ceil(enc.lo), ctx.ceil(enc.hi)
        else:
            half = gmpy2.mpq(1, 2)
            lo = ctx.floor(gmpy2.context(precision=bits + 8, round=gmpy2.RoundDown).add(enc.lo, half))
            hi = ctx.floor(gmpy2.context(precision=bits + 8, round=gmpy2.RoundUp).add(enc.hi, half))
        if lo == hi:
            return int(lo)
        bits *= 2
        if bits > cap:
            raise UncertifiableRoundingError(
                f"{mode.value} of f({n}) sits on a rounding boundary within "
                f"{cap_digits} digits"
            )


def _exact_fraction(f, n):
    total = Fraction(0)
    for term in f.terms:
        ex = f._term_exact(term, Fraction(n))
        if ex is None:
            raise AssertionError("exact enclosure without exact terms")
        total += ex
    return total


def round_many(f, ns, mode=RoundingMode.NEAREST, digits=DEFAULT_DIGITS):
    """Certified rounding over an iterable of arguments."""
    return [round_value(f, n, mode, digits) for n in ns]
