from fractions import Fraction

import pytest

from hardylab.constants import (
    ConstantRegistry,
    SymbolicReal,
    quadratic_surd_registry,
)
from hardylab.errors import BasisClosureError


def test_rational_vector_arithmetic():
    a = SymbolicReal({"1": Fraction(1, 2), "sqrt2": 3})
    b = SymbolicReal({"sqrt2": -3, "1": Fraction(1, 2)})
    assert (a + b) == SymbolicReal.rational(1)
    assert (a - a).is_zero()
    assert a.scale(2) == SymbolicReal({"1": 1, "sqrt2": 6})
    assert not a.is_rational()
    assert (a - SymbolicReal.symbol("sqrt2", 3)).is_rational()


def test_exact_zero_is_coordinatewise():
    # numerically tiny but nonzero coordinates stay nonzero
    x = SymbolicReal({"sqrt2": Fraction(1, 10 ** 40)})
    assert not x.is_zero()


def test_surd_products_and_division():
    reg = quadratic_surd_registry(2, 3)
    s2 = SymbolicReal.symbol("sqrt2")
    s3 = SymbolicReal.symbol("sqrt3")
    s6 = SymbolicReal.symbol("sqrt6")
    assert reg.mul(s2, s2) == SymbolicReal.rational(2)
    assert reg.mul(s2, s3) == s6
    assert reg.mul(s2, s6) == s3.scale(2)
    assert reg.mul(s3, s6) == s2.scale(3)
    # division in the field
    x = SymbolicReal({"1": 1, "sqrt2": 1})
    y = reg.div(SymbolicReal.rational(1), x)  # 1/(1+sqrt2) = sqrt2 - 1
    assert y == SymbolicReal({"1": -1, "sqrt2": 1})
    assert reg.has_complete_products()


def test_undeclared_product_raises():
    reg = ConstantRegistry().declare("alpha", "0.1234567890123456789012345678901234567890123456789012345678901234")
    a = SymbolicReal.symbol("alpha")
    with pytest.raises(BasisClosureError):
        reg.mul(a, a)


def test_sign_and_numeric_consistency():
    reg = quadratic_surd_registry(2)
    alpha = SymbolicReal({"sqrt2": 1, "1": -1})
    assert reg.sign(alpha) == 1
    assert reg.sign(alpha.scale(-1)) == -1
    assert reg.sign(SymbolicReal()) == 0
    # the numeric value matches the rational-weighted sum of constants
    enc = reg.value_enclosure(alpha, 256)
    v = float(enc.mid)
    assert abs(v - (2 ** 0.5 - 1)) < 1e-12
    assert float(enc.radius) < 1e-60


def test_registry_json_round_trip():
    reg = quadratic_surd_registry(2, 3)
    blob = reg.to_json()
    reg2 = ConstantRegistry.from_json(blob)
    s2 = SymbolicReal.symbol("sqrt2")
    s3 = SymbolicReal.symbol("sqrt3")
    assert reg2.mul(s2, s3) == reg.mul(s2, s3)
    assert reg2.to_json() == blob


def test_decimal_constant_precision_cap():
    from hardylab.errors import PrecisionExhaustedError

    reg = ConstantRegistry().declare("c", "0.50000000000000000000")
    enc = reg.enclosure("c", 60)
    assert float(enc.lo) <= 0.5 <= float(enc.hi)
    with pytest.raises(PrecisionExhaustedError):
        reg.enclosure("c", 4096)
