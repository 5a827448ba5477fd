from fractions import Fraction

import numpy as np
import pytest

from hardylab.catalog import (
    example1_family,
    example5_bohr_set,
    example5_combination,
    example5_family,
    example8_family,
    example8_reference_set,
    sqrt2_minus_1,
    sqrt2_registry,
    two_point_system,
)
from hardylab.germs import HardyExpr
from hardylab.patterns import (
    BohrSet,
    ExplicitSet,
    PeriodicSet,
    banach_density_probe,
    cor_a4_probe,
    find_pattern,
    return_set,
    shifted_combination_value,
    upper_density_estimate,
)


def test_find_pattern_whole_line(reg_plain):
    allN = PeriodicSet((True,), "all")
    res = find_pattern(allN, [HardyExpr.t_power(reg_plain, 2)], "floor", 10, 10)
    assert res.witness.a == 1 and res.witness.n == 1


def test_example1_nearest_witness(example1):
    res = find_pattern(PeriodicSet.odds(), example1.germs(), "nearest", 100, 100, n_min=2)
    assert res.found and res.witness.n <= 100
    for x in res.witness.elements():
        assert x % 2 == 1


def test_example1_floor_exhaustive_prefix(example1):
    res = find_pattern(PeriodicSet.odds(), example1.germs(), "floor", 5000, 10 ** 6, n_min=2)
    assert not res.found
    res = find_pattern(PeriodicSet.odds(), example1.germs(), "ceil", 2000, 10 ** 6, n_min=2)
    assert not res.found


def test_witnesses_reverify_membership(rng):
    E = ExplicitSet(rng.choice(5000, size=2500, replace=False) + 1, n_max=5000)
    reg = sqrt2_registry()
    fam = [HardyExpr.t_power(reg, Fraction(4, 3))]
    res = find_pattern(E, fam, "floor", 200, 5000)
    if res.found:
        for x in res.witness.elements():
            assert E.contains(x)


def test_search_is_order_stable(example1):
    # exhaustive None is independent of how the work is sliced
    odds = PeriodicSet.odds()
    full = find_pattern(odds, example1.germs(), "floor", 1200, 10 ** 4, n_min=2)
    parts = [
        find_pattern(odds, example1.germs(), "floor", hi, 10 ** 4, n_min=lo)
        for lo, hi in ((2, 400), (401, 800), (801, 1200))
    ]
    assert not full.found and all(not p.found for p in parts)


def test_density_examples():
    odds = PeriodicSet.odds()
    est = upper_density_estimate(odds, [100, 10 ** 4])
    assert [e["density"] for e in est] == [0.5, 0.5]
    assert upper_density_estimate(ExplicitSet((), 10), [10])[0]["density"] == 0.0
    reg = sqrt2_registry()
    bohr = BohrSet(reg, [sqrt2_minus_1()], [(0.0, 0.125)])
    est = upper_density_estimate(bohr, [10 ** 4])
    assert abs(est[0]["density"] - 0.125) < 0.01


def test_bohr_first_anchor_matches_bruteforce(rng):
    reg = sqrt2_registry()
    bohr = BohrSet(reg, [sqrt2_minus_1()], [(0.0, 0.2)])
    for _ in range(20):
        offs = tuple(int(o) for o in rng.integers(-500, 500, size=2))
        fast = bohr.first_anchor(offs, 3000)
        slow = None
        for a in range(1, 3001):
            if bohr.contains(a) and all(bohr.contains(a + o) for o in offs):
                slow = a
                break
        assert fast == slow


def test_return_set_example8_and_banach():
    fam = example8_family()
    R = return_set(two_point_system(), {0}, fam.germs(), "nearest", 3000)
    ref = example8_reference_set(3000)
    assert R.members() == ref  # both empty at the golden constants
    probe = banach_density_probe(R, [100, 1000])
    assert probe[1000] < 0.02


def test_return_set_rational_angle_matches_formula():
    # alpha = 3/10, C = 3/5: nonempty return set; law: both offsets even
    from hardylab.constants import ConstantRegistry

    C = Fraction(3, 5)
    reg = ConstantRegistry()
    two_alpha = Fraction(3, 5)
    f1 = HardyExpr.polynomial(reg, [(1, two_alpha), (0, Fraction(-1, 2))])
    f2 = HardyExpr.polynomial(reg, [(1, two_alpha), (0, Fraction(1, 2))]) + HardyExpr.t_power(reg, -1).scale(-2 * C)
    R = return_set(two_point_system(), {0}, [f1, f2], "nearest", 400)
    from hardylab.rounding import round_value

    expect = []
    for n in range(1, 401):
        m1 = round_value(f1, n, "nearest")
        m2 = round_value(f2, n, "nearest")
        if m1 % 2 == 0 and m2 % 2 == 0:
            expect.append(n)
    assert R.members() == expect
    assert expect  # the construction is non-degenerate at these parameters


def test_whole_space_return_set():
    fam = example8_family()
    R = return_set(two_point_system(), {0, 1}, fam.germs(), "nearest", 50)
    assert R.members() == list(range(1, 51))


def test_return_set_linear_function_is_evens():
    reg = sqrt2_registry()
    R = return_set(two_point_system(), {0}, [HardyExpr.t_power(reg, 1)], "nearest", 60)
    assert R.members() == [n for n in range(1, 61) if n % 2 == 0]


def test_banach_examples():
    evens = [n for n in range(2, 10 ** 4, 2)]
    R = ExplicitSet(evens, n_max=10 ** 4)
    assert banach_density_probe(R, [100])[100] == pytest.approx(0.5)
    full = ExplicitSet(range(1, 1001), n_max=1000)
    assert banach_density_probe(full, [50])[50] == 1.0


def test_example5_combination_tends_to_one():
    terms = example5_combination()
    v4, err4 = shifted_combination_value(terms, 10 ** 4)
    assert err4 < 1e-12
    assert abs(v4 - 1) < 1e-2  # drift ~ 0.94 * t^(-1/2)
    v6, _ = shifted_combination_value(terms, 10 ** 6)
    assert abs(v6 - 1) < 1e-3
    assert abs(v6 - 1) < abs(v4 - 1)


def test_cor_a4_probe_trivial_witness(reg_plain):
    allN = PeriodicSet((True,), "all")
    res = cor_a4_probe([HardyExpr.t_power(reg_plain, 2)], 1, allN, "nearest", 10, 10)
    assert res.found and res.witness.a == 1 and res.witness.n == 1
    assert len(res.witness.offsets) == 2


def test_cor_a4_probe_bohr_prefix_none():
    fam = example5_family()
    E = example5_bohr_set(0.01)
    res = cor_a4_probe(fam.germs(), 2, E, "nearest", 300, 2000)
    assert not res.found


def test_shifted_offsets_match_symbolic_expansion():
    fam = example5_family()
    f1 = fam.functions["f1"]
    germ, bounds = f1.shift_expand(2, order=8)
    for t in (100, 1000):
        direct = f1.float_at(t + 2)
        bound = sum(b * float(t) ** float(e.off) for b, e in bounds)
        assert abs(germ.float_at(t) - direct) <= bound + 1e-9
