from fractions import Fraction

import pytest

from hardylab.constants import SymbolicReal
from hardylab.germs import (
    Exponent,
    Family,
    GermTerm,
    HardyExpr,
    characteristic_vector,
    compare,
    degree,
    log_growth,
)


def t_pow(reg, c, coeff=1):
    return HardyExpr.t_power(reg, c, coeff)


def test_eval_exact_examples(reg_plain):
    f = t_pow(reg_plain, Fraction(3, 2))
    enc, exact = f.eval(4)
    assert exact and float(enc.mid) == 8.0 and float(enc.radius) == 0.0

    g = t_pow(reg_plain, 1) - t_pow(reg_plain, Fraction(1, 2))
    enc, exact = g.eval(9)
    assert exact and float(enc.mid) == 6.0

    h = t_pow(reg_plain, Fraction(5, 2)) + t_pow(reg_plain, 1)
    enc, exact = h.eval(10 ** 4)
    assert exact and int(enc.mid) == 10 ** 10 + 10 ** 4


def test_eval_interval_is_tight(reg_plain):
    f = t_pow(reg_plain, Fraction(3, 2))
    enc, exact = f.eval(10)
    assert not exact
    v = 10 ** 1.5
    assert float(enc.lo) <= v <= float(enc.hi)
    assert float(enc.radius) < 1e-55


def test_derivative_examples(reg_plain):
    reg = reg_plain
    assert t_pow(reg, 2).derivative() == t_pow(reg, 1, 2)
    assert t_pow(reg, Fraction(5, 2)).derivative() == t_pow(
        reg, Fraction(3, 2), SymbolicReal.rational(Fraction(5, 2))
    )
    tlogt = HardyExpr(reg, [GermTerm(SymbolicReal.rational(1), 1, {1: 1})])
    expect = HardyExpr.log_power(reg) + HardyExpr.polynomial(reg, [(0, 1)])
    assert tlogt.derivative() == expect


def test_derivative_iterated_log_chain_rule(reg_plain):
    # d/dt log_2(t) = 1 / (t log t)
    g = HardyExpr.log_power(reg_plain, 1, depth=2)
    d = g.derivative()
    assert len(d.terms) == 1
    term = d.terms[0]
    assert term.t_exp == Exponent(-1)
    assert dict(term.logs) == {1: Fraction(-1)}


def test_derivative_matches_finite_differences(reg_plain):
    f = t_pow(reg_plain, Fraction(5, 2)) + HardyExpr(
        reg_plain, [GermTerm(SymbolicReal.rational(3), 1, {1: 1})]
    )
    df = f.derivative()
    t = 100
    errs = []
    for h in (Fraction(1, 100), Fraction(1, 1000), Fraction(1, 10000)):
        fd = (f.float_at(t + h) - f.float_at(t)) / float(h)
        errs.append(abs(fd - df.float_at(t)))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-2


def test_compare_examples(reg_plain):
    reg = reg_plain
    assert compare(t_pow(reg, Fraction(3, 2)), t_pow(reg, 2)).kind == "precedes"
    c = compare(t_pow(reg, Fraction(3, 2)) + t_pow(reg, 1), t_pow(reg, Fraction(3, 2)))
    assert c.kind == "same_order" and c.ratio == SymbolicReal.rational(1)
    tlogt = HardyExpr(reg, [GermTerm(SymbolicReal.rational(1), 1, {1: 1})])
    c = compare(tlogt.scale(2), tlogt)
    assert c.kind == "same_order" and c.ratio == SymbolicReal.rational(2)


def test_compare_properties_randomized(reg_plain, rng):
    reg = reg_plain
    pool = []
    for _ in range(12):
        c = Fraction(int(rng.integers(-3, 8)), int(rng.integers(1, 5)))
        r = Fraction(int(rng.integers(-2, 4)))
        coeff = Fraction(int(rng.integers(1, 9)))
        pool.append(HardyExpr(reg, [GermTerm(SymbolicReal.rational(coeff), c, {1: r})]))
    for f in pool:
        c = compare(f, f)
        assert c.kind == "same_order" and c.ratio == SymbolicReal.rational(1)
    for f in pool:
        for g in pool:
            cfg = compare(f, g).kind
            cgf = compare(g, f).kind
            assert (cfg == "precedes") == (cgf == "dominates")
            for h in pool:
                if cfg == "precedes" and compare(g, h).kind == "precedes":
                    assert compare(f, h).kind == "precedes"


def test_monotone_ratio_for_precedes(reg_plain):
    f = t_pow(reg_plain, Fraction(3, 2))
    g = t_pow(reg_plain, 2)
    assert compare(f, g).kind == "precedes"
    r6 = abs(f.float_at(10 ** 6) / g.float_at(10 ** 6))
    r3 = abs(f.float_at(10 ** 3) / g.float_at(10 ** 3))
    assert r6 < r3


def test_degree_examples(reg_plain):
    assert degree(t_pow(reg_plain, Fraction(5, 2))) == 3
    assert degree(t_pow(reg_plain, 1)) == 1
    assert degree(HardyExpr.log_power(reg_plain)) == 1
    assert degree(t_pow(reg_plain, 2)) == 2
    tlogt = HardyExpr(reg_plain, [GermTerm(SymbolicReal.rational(1), 1, {1: 1})])
    assert degree(tlogt) == 2  # t log t exceeds t but not t^2


def test_characteristic_vector_examples(reg_plain):
    reg = reg_plain
    assert characteristic_vector([t_pow(reg, 1), t_pow(reg, 1, 2)]) == (2,)
    fam = [t_pow(reg, Fraction(5, 2)), t_pow(reg, Fraction(5, 2)) + t_pow(reg, 1), t_pow(reg, 1)]
    assert characteristic_vector(fam) == (1, 0, 1)
    assert characteristic_vector([t_pow(reg, 2)]) == (0, 1)


def test_log_growth(reg_plain):
    w = HardyExpr(reg_plain, [GermTerm(SymbolicReal.rational(1), 1, {1: -1})])
    lg = log_growth(w)  # log(t / log t) grows like log t - log log t
    assert len(lg.terms) == 2
    assert degree(lg) == 1


def test_shift_expand_matches_direct_evaluation(reg_plain):
    f = t_pow(reg_plain, Fraction(5, 2)) + t_pow(reg_plain, 1, 3)
    for j in (1, 2):
        germ, bounds = f.shift_expand(j, order=6)
        for t in (50, 400, 3000):
            direct = f.float_at(t + j)
            approx = germ.float_at(t)
            bound = sum(b * float(t) ** float(Fraction(e.off)) for b, e in bounds)
            assert abs(direct - approx) <= bound + 1e-9
            assert abs(direct - approx) < 1e-3


def test_family_json_round_trip(example2):
    blob = example2.to_json()
    fam2 = Family.from_json(blob)
    assert fam2.to_json() == blob
    for name in example2.functions:
        a = example2.functions[name]
        b = fam2.functions[name]
        assert a.to_json() == b.to_json()


def test_eval_requires_t_at_least_one(reg_plain):
    from hardylab.germs import DomainError

    f = t_pow(reg_plain, 2)
    with pytest.raises(DomainError):
        f.eval(0)
