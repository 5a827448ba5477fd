from fractions import Fraction

import numpy as np
import pytest

from hardylab.catalog import (
    example8_family,
    example8_reference_set,
    sqrt2_minus_1,
    sqrt2_registry,
    torus_system,
    two_point_system,
)
from hardylab.constants import SymbolicReal, quadratic_surd_registry
from hardylab.correlate import (
    ap_decomposition_check,
    correlation_values,
    multicorrelation,
    offsets_matrix,
    partition_weights,
    product_limit_test,
    vdc_check,
    weighted_avg,
)
from hardylab.germs import HardyExpr
from hardylab.rounding import RoundingMode
from hardylab.systems import BoxSet, CyclicRotation, Observable, TorusRotation
from hardylab.weights import make_weight


@pytest.fixture(scope="module")
def wt():
    return make_weight(sqrt2_registry(), "t")


def test_weighted_avg_constants(wt):
    rep = weighted_avg(np.ones(10 ** 4), wt, [10, 10 ** 2, 10 ** 4])
    assert all(abs(a - 1) < 1e-12 for a in rep.averages)
    assert rep.weight_totals == [10.0, 100.0, 10000.0]


def test_weighted_avg_alternating_and_even(wt):
    a = np.where(np.arange(1, 10 ** 4 + 1) % 2 == 0, 1.0, -1.0)
    assert weighted_avg(a, wt, [10 ** 4]).averages[0] == 0.0
    ind = (np.arange(1, 10 ** 6 + 1) % 2 == 0).astype(float)
    assert abs(weighted_avg(ind, wt, [10 ** 6]).averages[0] - 0.5) < 1e-6


def test_weighted_avg_bounded_by_sup(wt, rng):
    a = rng.uniform(-3, 3, size=5000)
    for name in ("t", "t^(1/2)", "log t"):
        w = make_weight(sqrt2_registry(), name)
        rep = weighted_avg(a, w, [100, 5000])
        for v in rep.averages:
            assert abs(v) <= 3.0 + 1e-9


def test_cyclic_multicorrelation_equals_orbit_bruteforce(rng):
    # closed-form residue engine vs literal orbit enumeration, exactly
    reg = sqrt2_registry()
    for _ in range(12):
        m = int(rng.integers(2, 65))
        shift = int(rng.integers(1, m))
        import math

        sys_ = CyclicRotation(m, shift)
        A = frozenset(int(x) for x in rng.choice(m, size=max(1, m // 3), replace=False))
        offs = [tuple(int(o) for o in row) for row in rng.integers(0, 10 ** 6, size=(40, 2))]
        vals, se, engine = correlation_values(sys_, A, offs)
        assert se is None
        for row, v in zip(offs, vals):
            inter = set(A)
            for off in row:
                pre = {(x - off * shift) % m for x in A}
                inter &= pre
            assert v == len(inter) / m


def test_torus_engine_against_monte_carlo(rng):
    reg = sqrt2_registry()
    tor = torus_system()
    samples = rng.random(10 ** 5)
    for _ in range(10):
        u = float(rng.random())
        ln = float(rng.uniform(0.05, 0.9))
        A = BoxSet([(u, ln)])
        offs = [tuple(int(o) for o in rng.integers(1, 1000, size=2))]
        vals, _, _ = correlation_values(tor, A, offs)
        # Monte-Carlo estimate of the same intersection
        from hardylab.correlate import _torus_shift

        ok = (samples - u) % 1.0 < ln
        for off in offs[0]:
            s = _torus_shift(tor, 0, off, 64)
            ok &= (samples - ((u - s) % 1.0)) % 1.0 < ln
        p = ok.mean()
        se = max((p * (1 - p) / len(samples)) ** 0.5, 1e-4)
        assert abs(vals[0] - p) <= 4 * se


def test_multicorrelation_trivial_cases(wt):
    tor = torus_system()
    f_n = HardyExpr.t_power(sqrt2_registry(), 1)
    empty = BoxSet([(0.0, 0.0)])
    rep = multicorrelation(tor, empty, [f_n], "floor", wt, [200])
    assert rep.averages == [0.0]


def test_multicorrelation_classic_rotation_value(wt):
    # A = [0, 1/2), F = {n}: average tends to 1/4
    tor = torus_system()
    f_n = HardyExpr.t_power(tor.reg, 1)
    A = BoxSet.from_endpoints([(0, 0.5)])
    rep = multicorrelation(tor, A, [f_n], "nearest", wt, [10 ** 4])
    assert abs(rep.averages[0] - 0.25) < 0.01


def test_example8_return_law():
    # alpha(n) > 0 exactly when both rounded offsets are even; for the golden
    # constants that means {n alpha} < C/n, checked against brute force
    fam = example8_family()
    sys_ = two_point_system()
    offs = offsets_matrix(fam.germs(), 3000, RoundingMode.NEAREST)
    vals, _, _ = correlation_values(sys_, {0}, offs)
    for n, (row, v) in enumerate(zip(offs, vals), start=1):
        expect = 0.5 if all(o % 2 == 0 for o in row) else 0.0
        assert v == expect


def test_skew_engine_reports_stderr(wt):
    from hardylab.catalog import skew_system

    skew = skew_system()
    f_n = HardyExpr.t_power(skew.reg, 1)
    A = BoxSet([(0.0, 0.5), (0.0, 0.5)])
    rep = multicorrelation(skew, A, [f_n], "nearest", wt, [200], samples=2048, seed=7)
    assert rep.engine == "sampled-skew"
    assert rep.stderr is not None and rep.stderr[0] < 0.05
    assert 0.05 < rep.averages[0] < 0.45


def test_product_limit_trivial(wt):
    tor = torus_system()
    f = HardyExpr.t_power(tor.reg, Fraction(3, 2))
    res = product_limit_test(tor, [Observable.one()], [f], "nearest", wt, 500)
    assert res["distance"] < 1e-12


def test_product_limit_character_decay(wt):
    tor = torus_system()
    f = HardyExpr.t_power(tor.reg, Fraction(3, 2))
    res = product_limit_test(
        tor, [Observable.character((1,))], [f], "nearest", wt, 20000
    )
    avg = res["weighted_average"]
    mag = (avg["re"] ** 2 + avg["im"] ** 2) ** 0.5
    assert mag < 0.05
    proj = res["projection_product"]
    assert (proj["re"] ** 2 + proj["im"] ** 2) ** 0.5 < 0.01


def test_product_limit_two_fractional_powers(wt):
    tor = torus_system()
    fam = [
        HardyExpr.t_power(tor.reg, Fraction(3, 2)),
        HardyExpr.t_power(tor.reg, Fraction(4, 3)),
    ]
    obs = [Observable.character((1,)), Observable.character((1,))]
    res = product_limit_test(tor, obs, fam, "nearest", wt, 20000)
    avg = res["weighted_average"]
    assert (avg["re"] ** 2 + avg["im"] ** 2) ** 0.5 < 0.05
    assert res["distance"] < 0.06


def test_vdc_examples():
    u = np.ones(10 ** 4 + 200, dtype=complex)
    res = vdc_check(u, np.ones(10 ** 4), 50)
    assert res["lhs"] == pytest.approx(1.0)
    assert res["rhs"] == pytest.approx(1.0)
    th = 2 ** 0.5 - 1
    n = np.arange(1, 10 ** 5 + 101)
    res = vdc_check(np.exp(2j * np.pi * th * n), np.ones(10 ** 5), 100)
    assert res["lhs"] < 1e-4
    assert res["rhs"] < 0.05
    res = vdc_check(np.exp(2j * np.pi * th * n * n), np.ones(10 ** 5), 100)
    assert res["lhs"] < 0.01


def test_partition_weights_ratios(wt):
    g = HardyExpr.t_power(sqrt2_registry(), Fraction(1, 2))
    pw = partition_weights(wt, g, 10 ** 4)
    i = pw["ratio_index"].index(98)
    assert 0.99 <= pw["ratios"]["W_over_P"][i] <= 1.01
    assert abs(pw["ratios"]["increment"][i] - 1) < 0.05
    assert pw["ratios"]["p_over_P"][i] < 0.05
    assert pw["ratios"]["P"][i] > pw["ratios"]["P"][0]


def test_partition_weights_identity_levels(wt):
    # g = t: singleton level sets, p_j = w(j)
    g = HardyExpr.t_power(sqrt2_registry(), 1)
    pw = partition_weights(wt, g, 500)
    assert all(s == 1 for s in pw["sizes"][1:])
    assert all(abs(p - 1) < 1e-9 for p in pw["p"][1:])


def test_partition_weights_precondition(wt):
    from hardylab.errors import PreconditionError

    g = HardyExpr.log_power(sqrt2_registry())  # log t is not >> log W for W=t
    with pytest.raises(PreconditionError):
        partition_weights(wt, g, 1000)


def test_ap_decomposition_examples(wt):
    n_top = 10 ** 5
    ones = np.ones(3 * n_top + 4)
    assert ap_decomposition_check(ones, wt, 3, n_top)["residual"] < 1e-12
    alt = np.where(np.arange(1, 2 * n_top + 3) % 2 == 0, 1.0, -1.0)
    assert ap_decomposition_check(alt, wt, 2, n_top)["residual"] < 1e-3
    e = np.exp(2j * np.pi * np.sqrt(2) * np.arange(1, 3 * n_top + 4))
    assert ap_decomposition_check(e, wt, 3, n_top)["residual"] < 1e-2


def test_thread_count_does_not_change_results(wt, rng):
    a = rng.standard_normal(2 * 10 ** 5)
    r1 = weighted_avg(a, wt, [65536, 2 * 10 ** 5], threads=1)
    r8 = weighted_avg(a, wt, [65536, 2 * 10 ** 5], threads=8)
    assert r1.averages == r8.averages
