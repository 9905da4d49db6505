import math

import numpy as np
import pytest

from apset import (Box, ExpPolynomial, IndexBox, LatticeMatrix, PointMultiSet,
                   SignedSetUnsupported, card_bound, card_in, counting,
                   decompose, discrepancy, f_shift_quality, perturbed_lattice,
                   sort_line)
from apset.one_dim import IndexedSamples, shift_quality_table
from apset.signed_examples import dyadic_signed_set

from conftest import integer_line, zero_poly


def test_sort_line_integer_lattice():
    S = sort_line(integer_line(50))
    assert S.anchor_offset == 0.0
    for k in (-50, -3, 0, 17, 50):
        assert S.value_at(k) == float(k)


def test_sort_line_monotone_sine(sine_2k):
    S = sort_line(sine_2k)
    assert (np.diff(S.values) > 0).all()
    assert S.value_at(1) == pytest.approx(1.1682941969615794, abs=1e-12)


def test_sort_line_expands_multiplicity():
    A = PointMultiSet([[0.0], [0.5]], [2, 1], Box([-1.0], [1.0]))
    S = sort_line(A)
    assert S.values.tolist() == [0.0, 0.0, 0.5]
    # the jump of n(t) at a repeated point equals its multiplicity
    assert counting(S, 0.25) - counting(S, -0.25) == 2


def test_sort_line_rejects_signed():
    with pytest.raises(SignedSetUnsupported):
        sort_line(dyadic_signed_set(16))


def test_counting_values():
    S = sort_line(integer_line(50))
    assert counting(S, 3.0) == 3
    assert counting(S, 0.0) == 0
    # (t, 0] includes the point at 0, so three integers lie in (-2.5, 0]
    assert counting(S, -2.5) == -3
    assert counting(S, 2.5) == 2


def test_counting_consistent_with_card_in():
    A = integer_line(50)
    S = sort_line(A)
    for t in (7.3, 0.4, -4.9):
        if t > 0:
            assert counting(S, t) == card_in(A, Box([0.0], [t]))
        else:
            assert counting(S, t) == -card_in(A, Box([t], [0.0]))


def test_counting_monotone_step():
    S = sort_line(integer_line(30))
    ts = np.linspace(-20, 20, 401)
    vals = [counting(S, float(t)) for t in ts]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_counting_outside_window():
    S = sort_line(integer_line(5))
    with pytest.raises(ValueError):
        counting(S, 50.0)


def test_discrepancy_integer_lattice():
    S = sort_line(integer_line(200))
    rng = np.random.default_rng(0)
    x = rng.uniform(-150, 100, 2000)
    h = rng.uniform(0.1, 50, 2000)
    assert discrepancy(S, 1.0, x, h) <= 1.0


def test_discrepancy_detects_bad_slope():
    S = sort_line(integer_line(200))
    assert discrepancy(S, 1.1, [0.0], [100.0]) >= 10.0


def test_discrepancy_sine_real_pairs(sine_10k):
    # real-valued sample pairs: the exact bound is 1 + 2*amplitude
    S = sort_line(sine_10k)
    rng = np.random.default_rng(1)
    x = rng.uniform(-9000, 8000, 10_000)
    h = rng.uniform(0.1, 1000, 10_000)
    d = discrepancy(S, 1.0, x, h)
    assert d <= 1.0 + 2 * 0.2
    assert d <= 4 * card_bound(sine_10k)


def test_discrepancy_bounded_by_4M_for_generated_sets(sine_2k):
    for A in (integer_line(500), sine_2k):
        S = sort_line(A)
        rng = np.random.default_rng(2)
        lo = A.window.lower[0]
        hi = A.window.upper[0]
        x = rng.uniform(lo + 1, hi - 200, 3000)
        h = rng.uniform(0.1, 150, 3000)
        assert discrepancy(S, 1.0, x, h) <= 4 * card_bound(A)


def test_decompose_integer_lattice():
    res = decompose(sort_line(integer_line(300)))
    assert res.slope == pytest.approx(1.0, abs=1e-12)
    assert np.abs(res.remainder.values).max() <= 1e-9


def test_decompose_step_two_progression():
    A = perturbed_lattice(LatticeMatrix([[2.0]]), [zero_poly()], IndexBox.centered(300))
    res = decompose(sort_line(A))
    assert res.slope == pytest.approx(2.0, abs=1e-12)
    assert np.abs(res.remainder.values).max() <= 1e-9


def test_decompose_sine(sine_10k):
    res = decompose(sort_line(sine_10k))
    assert abs(res.slope - 1.0) <= 1e-3
    k = np.arange(res.remainder.k_min, res.remainder.k_max + 1)
    truth = 0.2 * np.sin(k)
    n = k.size
    inner = slice(n // 10, n - n // 10)  # inner 80% of indices
    err = np.abs(res.remainder.values - truth)[inner].max()
    assert err <= 1e-2


def test_decompose_roundtrip_error_bound():
    # slope recovers the lattice step; remainder recovers the perturbation
    g = 2.0
    F = [ExpPolynomial.sine(amplitude=0.3)]
    A = perturbed_lattice(LatticeMatrix([[g]]), F, IndexBox.centered(2000))
    res = decompose(sort_line(A))
    window_len = A.window.sides[0]
    assert abs(res.slope / g - 1.0) <= 10.0 / window_len
    k = np.arange(res.remainder.k_min, res.remainder.k_max + 1)
    truth = 0.3 * np.sin(k)
    kmax = max(abs(res.remainder.k_min), res.remainder.k_max)
    slack = 2 * abs(res.slope - g) * kmax + 1e-9
    assert np.abs(res.remainder.values - truth).max() <= slack


def test_decompose_identity_reconstruction(sine_2k):
    S = sort_line(sine_2k)
    res = decompose(S)
    k = np.arange(res.remainder.k_min, res.remainder.k_max + 1)
    rebuilt = res.slope * k + res.remainder.values
    np.testing.assert_allclose(rebuilt, S.values, rtol=0, atol=1e-9)


def test_decompose_needs_two_points():
    A = PointMultiSet([[0.5]], [1], Box([-1.0], [1.0]))
    with pytest.raises(ValueError):
        decompose(sort_line(A))


def test_f_shift_quality_zero_function():
    f = IndexedSamples(k_min=-10, values=np.zeros(21))
    for q in (1, 5, -7):
        assert f_shift_quality(f, q) == 0.0


def test_f_shift_quality_sine_values():
    k = np.arange(-5000, 5001)
    f = IndexedSamples(k_min=-5000, values=0.2 * np.sin(k))
    # closed form: sup_m |f(m+q) - f(m)| -> 0.4 |sin(q/2)|
    assert f_shift_quality(f, 3) == pytest.approx(0.4 * abs(math.sin(1.5)), abs=2e-3)
    assert f_shift_quality(f, 710) <= 0.2 * 6.03e-5 + 1e-9


def test_f_shift_quality_range_errors():
    f = IndexedSamples(k_min=0, values=np.zeros(5))
    with pytest.raises(ValueError):
        f_shift_quality(f, 0)
    with pytest.raises(ValueError):
        f_shift_quality(f, 5)


def test_shift_quality_table_pairs_real_periods(sine_2k):
    res = decompose(sort_line(sine_2k))
    rows = shift_quality_table(res, [25.0, 44.0])
    assert [q for _, q, _ in rows] == [25, 44]
    for tau, q, quality in rows:
        # slack covers the least-squares slope error times q
        assert quality <= 0.4 * abs(math.sin(q / 2)) + 1e-4
