import numpy as np

from hardylab.intersective import (
    IntPoly,
    is_intersective_up_to,
    jointly_intersective_up_to,
    roots_mod,
)


def test_roots_mod_examples():
    assert roots_mod(IntPoly([0, 0, 1]), 4) == [0, 2]
    assert roots_mod(IntPoly([1, 0, 1]), 4) == []
    assert roots_mod(IntPoly([-2, 0, 1]), 7) == [3, 4]


def test_roots_mod_crt_property(rng):
    for _ in range(60):
        q = IntPoly([int(c) for c in rng.integers(-9, 10, size=5)])
        if not q:
            continue
        m = int(rng.integers(2, 1000))
        brute = [n for n in range(m) if q.eval_mod(n, m) == 0]
        assert roots_mod(q, m) == brute


def test_hensel_matches_exhaustive(rng):
    prime_powers = [p ** k for p in (2, 3, 5) for k in range(1, 5) if p ** k <= 625]
    for _ in range(40):
        q = IntPoly([int(c) for c in rng.integers(-6, 7, size=6)])
        if not q:
            continue
        for pk in prime_powers:
            brute = [n for n in range(pk) if q.eval_mod(n, pk) == 0]
            assert roots_mod(q, pk) == brute


def test_intersectivity_examples():
    assert is_intersective_up_to(IntPoly([-4, 0, 1]), 2000).passed  # root 2
    rep = is_intersective_up_to(IntPoly([1, 0, 1]), 100)
    assert not rep.passed and rep.failing_modulus == 4
    q = IntPoly([-13, 0, 1]) * IntPoly([-17, 0, 1]) * IntPoly([-221, 0, 1])
    assert is_intersective_up_to(q, 10 ** 3).passed


def test_integer_root_always_passes(rng):
    for _ in range(10):
        r = int(rng.integers(-20, 20))
        other = IntPoly([int(c) for c in rng.integers(-5, 6, size=3)] + [1])
        q = IntPoly([-r, 1]) * other
        assert is_intersective_up_to(q, 500).passed


def test_jointly_intersective_examples():
    fam = [IntPoly([0] * i + [1]) for i in range(1, 5)]  # t, t^2, t^3, t^4
    assert jointly_intersective_up_to(fam, 300).passed
    assert jointly_intersective_up_to([IntPoly([0, 0, 1]), IntPoly([0, 1, 1])], 300).passed
    rep = jointly_intersective_up_to([IntPoly([-1, 1]), IntPoly([1, 1])], 300)
    assert not rep.passed and rep.failing_modulus == 3


def test_reports_carry_witness_roots():
    rep = is_intersective_up_to(IntPoly([-4, 0, 1]), 50)
    for pk, r in rep.witnesses.items():
        assert IntPoly([-4, 0, 1]).eval_mod(r, pk) == 0
