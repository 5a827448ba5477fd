"""Weight functions for weighted averages: 1 << W(t) << t.

A weight is a germ together with numeric machinery: W(n) values, the
discrete derivative w(n) = W(n+1) - W(n), and the exact growth class of
log W(t) used by the compatibility (Property-P style) checks.  The ladder
entry exp(sqrt(log t)) is not representable as a finite power/log sum, so
a weight carries its own numeric rule and an exact log-growth germ; the
germ field is None for that entry.

Small-n values are clamped at the first index where the germ is positive
and increasing, so w(n) >= 0 everywhere and averages of bounded sequences
stay bounded; this changes nothing asymptotically.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .constants import SymbolicReal
from .germs import GermTerm, HardyExpr, log_growth


class Weight:
    """Numeric weight with an exact log-growth germ for comparisons."""

    def __init__(self, name, germ, log_germ, fn, start=1):
        self.name = name
        self.germ = germ          # HardyExpr or None
        self.log_germ = log_germ  # HardyExpr, growth class of log W
        self._fn = fn             # vectorized ndarray -> ndarray
        self.start = start        # clamp index: W(n) = W(max(n, start))

    def values(self, ns):
        ns = np.asarray(ns, dtype=np.float64)
        return self._fn(np.maximum(ns, float(self.start)))

    def value(self, n):
        return float(self.values(np.asarray([n]))[0])

    def weight_array(self, N):
        """w(n) = W(n+1) - W(n) for n = 1..N, float64."""
        vals = self.values(np.arange(1, N + 2, dtype=np.float64))
        return np.diff(vals)

    def diagnostics(self, grid):
        """Testable invariants on a grid: w > 0 eventually, W -> inf, w/W -> 0."""
        out = []
        for N in grid:
            N = int(N)
            w_last = self.value(N + 1) - self.value(N)
            out.append({"N": N, "W": self.value(N), "w_over_W": w_last / self.value(N)})
        return out

    def __repr__(self):
        return f"Weight({self.name})"


def _poly_weight(reg, name, c):
    germ = HardyExpr.t_power(reg, c)
    e = float(c)
    return Weight(name, germ, log_growth(germ), lambda t, e=e: t ** e)


def make_weight(reg, name):
    """Construct a ladder weight by name over the given registry."""
    if name in ("t", "cesaro"):
        return _poly_weight(reg, "t", Fraction(1))
    if name == "t/log t":
        germ = HardyExpr(reg, [GermTerm(SymbolicReal.rational(1), 1, {1: Fraction(-1)})])
        return Weight(name, germ, log_growth(germ), lambda t: t / np.log(t), start=3)
    if name == "t^(1/2)":
        return _poly_weight(reg, name, Fraction(1, 2))
    if name == "t^(1/3)":
        return _poly_weight(reg, name, Fraction(1, 3))
    if name == "exp(sqrt(log t))":
        log_germ = HardyExpr.log_power(reg, Fraction(1, 2))
        return Weight(name, None, log_germ, lambda t: np.exp(np.sqrt(np.log(t))), start=2)
    if name == "log t":
        germ = HardyExpr.log_power(reg)
        return Weight(name, germ, log_growth(germ), lambda t: np.log(t), start=2)
    if name == "log log t":
        germ = HardyExpr.log_power(reg, 1, depth=2)
        return Weight(name, germ, log_growth(germ), lambda t: np.log(np.log(t)), start=4)
    raise ValueError(f"unknown weight {name!r}")


# Candidate weights in decreasing growth order ("largest first").
LADDER = (
    "t",
    "t/log t",
    "t^(1/2)",
    "t^(1/3)",
    "exp(sqrt(log t))",
    "log t",
    "log log t",
)


def ladder(reg):
    return [make_weight(reg, name) for name in LADDER]
