import numpy as np
import pytest

from hardylab.catalog import sqrt2_registry
from hardylab.weights import LADDER, ladder, make_weight


def test_ladder_is_growth_sorted():
    reg = sqrt2_registry()
    ws = ladder(reg)
    vals = [w.value(10 ** 9) for w in ws]
    assert vals == sorted(vals, reverse=True)


def test_weight_invariants_on_grid():
    reg = sqrt2_registry()
    grid = [10 ** 3, 10 ** 4, 10 ** 5]
    for name in LADDER:
        w = make_weight(reg, name)
        d = w.diagnostics(grid)
        # W increases along the grid and w/W shrinks
        assert d[0]["W"] < d[1]["W"] < d[2]["W"]
        assert d[2]["w_over_W"] < 0.01
        assert d[2]["w_over_W"] >= 0
        arr = w.weight_array(2000)
        assert (arr >= 0).all()


def test_weight_array_matches_value_differences():
    reg = sqrt2_registry()
    w = make_weight(reg, "t/log t")
    arr = w.weight_array(500)
    for n in (10, 100, 499):
        assert arr[n - 1] == pytest.approx(w.value(n + 1) - w.value(n))


def test_cesaro_alias():
    reg = sqrt2_registry()
    w = make_weight(reg, "cesaro")
    assert np.all(w.weight_array(100) == 1.0)
