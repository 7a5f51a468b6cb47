import math
import random

import pytest

from qmzv.limits import (
    corollary1_check,
    corollary1_targets,
    doubling_ladder,
    extrapolate,
    xi_estimate,
    xi_estimate_sum,
    zn_complex,
)
from qmzv.qsums import compositions, zn


def test_zn_complex_examples():
    assert abs(zn_complex((1,), 3) - complex(1.5, -math.sqrt(3) / 2)) < 1e-12
    assert abs(zn_complex((2,), 3) - complex(-1, math.sqrt(3))) < 1e-12


def test_embedding_consistency_sample():
    rng = random.Random(3)
    comps = [c for w in range(1, 5) for c in compositions(w)]
    for _ in range(25):
        s, n = rng.choice(comps), rng.randint(2, 50)
        assert abs(zn_complex(s, n) - complex(zn(s, n))) <= 1e-9


def test_zn_complex_rejects_small_n():
    with pytest.raises(ValueError):
        zn_complex((1,), 1)


def test_ladder():
    assert doubling_ladder(16) == [16]
    assert doubling_ladder(100) == [16, 32, 64]
    with pytest.raises(ValueError):
        doubling_ladder(8)


def test_richardson_cancels_first_order_term():
    ns = [16, 32, 64]
    vals = [3 + 2j + 5 / n for n in ns]
    value, err, _ = extrapolate(ns, vals, "richardson")
    assert abs(value - (3 + 2j)) < 1e-12
    assert err == pytest.approx(5 / 64)
    value, err, _ = extrapolate(ns, vals, "last_value")
    assert value == vals[-1] and err == pytest.approx(5 / 32 - 5 / 64)


def test_xi_two_is_pi_squared_over_three():
    est = xi_estimate((2,), 4096)
    assert abs(est.value - math.pi**2 / 3) < 1e-3
    assert est.n_sequence == doubling_ladder(4096)
    assert len(est.raw_values) == len(est.n_sequence)


def test_xi_short_ladder_has_large_error_estimate():
    est = xi_estimate((2, 3), 16)
    assert est.error_estimate > 0.1


def test_error_estimate_decreases_for_depth_one():
    est = xi_estimate((1,), 4096)
    c = est.corrections
    assert all(b < a for a, b in zip(c, c[1:]))


def test_second_identity_sum_tends_to_zero():
    est = xi_estimate_sum([(2, 3), (3, 2)], 2048)
    assert abs(est.value) < 1e-3


def test_cauchy_behaviour():
    for w in range(1, 5):
        for s in compositions(w):
            diffs = []
            for n in (64, 128, 256, 512):
                diffs.append(abs(zn_complex(s, 2 * n) - zn_complex(s, n)))
            assert all(b < a for a, b in zip(diffs, diffs[1:])), s


def test_corollary1_targets():
    t1, t2 = corollary1_targets(0, 0)
    assert abs(t1 - 2 * math.pi**2 / 3) < 1e-12 and t2 == 0
    t1, _ = corollary1_targets(1, 0)
    assert abs(t1 - (-1j * math.pi**3 / 3)) < 1e-12


def test_corollary1_check_passes_and_misses():
    res = corollary1_check(0, 0, n_max=1024, tol=5e-3)
    assert res.status == "verified"
    res = corollary1_check(0, 0, n_max=64, tol=1e-9)
    assert res.status == "counterexample"
    assert res.extra["residuals"][0] > 1e-9
