"""hardylab: symbolic + numeric laboratory for recurrence along Hardy-field
sequences: germ algebra, recurrence-condition checkers, measure-preserving
simulators, weighted multicorrelation averages, uniformity seminorms,
equidistribution diagnostics and pattern searches."""

from .constants import ConstantRegistry, SymbolicReal, quadratic_surd_registry
from .germs import (
    Exponent,
    Family,
    GermTerm,
    GrowthComparison,
    HardyExpr,
    characteristic_vector,
    compare,
    degree,
    log_growth,
)
from .rounding import RoundingMode, round_value

__version__ = "0.1.0"

__all__ = [
    "ConstantRegistry",
    "SymbolicReal",
    "quadratic_surd_registry",
    "Exponent",
    "Family",
    "GermTerm",
    "GrowthComparison",
    "HardyExpr",
    "characteristic_vector",
    "compare",
    "degree",
    "log_growth",
    "RoundingMode",
    "round_value",
]
