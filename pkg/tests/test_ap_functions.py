import math

import numpy as np
import pytest

from apset import Box, ExpPolynomial, Grid1D, GridND, grid_sup_diff, shift_bound
from apset.ap_functions import default_grid


def random_real_poly(rng, dim=1, max_terms=4):
    """Random real-valued polynomial: sum of a*sin(f.x) + b*cos(f.x) terms."""
    freqs, coeffs = [], []
    for _ in range(rng.integers(1, max_terms + 1)):
        f = rng.uniform(-3, 3, dim)
        a, b = rng.uniform(-2, 2, 2)
        freqs.extend([f, -f])
        coeffs.extend([b / 2 + a / 2j, b / 2 - a / 2j])
    return ExpPolynomial(np.array(freqs), coeffs, dim=dim)


def test_constant_evaluates_everywhere():
    P = ExpPolynomial.constant(1.0)
    for x in (-3.7, 0.0, 12.5):
        assert P.evaluate(x) == pytest.approx(1.0, abs=1e-15)


def test_sine_evaluation():
    P = ExpPolynomial.sine()
    assert P.real_valued
    assert P.evaluate(math.pi / 2) == pytest.approx(1.0, abs=1e-12)
    # library-grade sine oracle
    assert P.evaluate(1.0) == pytest.approx(0.8414709848078965, abs=1e-14)


def test_duplicate_frequencies_merge():
    P = ExpPolynomial(np.array([[1.0], [1.0], [-1.0]]), [1.0, 2.0, 0.5])
    assert P.n_terms == 2


def test_shift_bound_near_two_pi():
    P = ExpPolynomial.sine()
    assert shift_bound(P, [2 * math.pi]) <= 1e-15


def test_shift_bound_710():
    # |e^{i 710} - 1| = 2|sin 355|; 710/113 is a convergent of 2*pi
    P = ExpPolynomial.sine()
    expected = 2 * abs(math.sin(355.0))
    assert expected == pytest.approx(6.0288706718976894e-05, rel=1e-9)
    assert shift_bound(P, [710.0]) == pytest.approx(expected, rel=1e-10)


def test_shift_bound_constant_is_zero():
    P = ExpPolynomial.constant(3.0)
    for tau in (-4.2, 0.0, 17.0):
        assert shift_bound(P, [tau]) == 0.0


def test_grid_sup_diff_periodic_shift():
    # frequencies 2*pi -> every integer shift is a period up to round-off
    P = ExpPolynomial.sine(frequency=2 * math.pi)
    grid = Grid1D(Box([-5.0], [5.0]), 0.01)
    assert grid_sup_diff(P, [1.0], grid) <= 1e-12


def test_grid_sup_diff_sine_pi():
    P = ExpPolynomial.sine()
    grid = Grid1D(Box([-5.0], [5.0]), 1e-3)
    val = grid_sup_diff(P, [math.pi], grid)
    assert val == pytest.approx(2.0, abs=1e-5)
    assert val <= shift_bound(P, [math.pi])


def test_grid_sup_diff_callable():
    grid = Grid1D(Box([-5.0], [5.0]), 1e-3)
    val = grid_sup_diff(lambda x: np.sin(x[:, 0]), [710.0], grid)
    assert val <= shift_bound(ExpPolynomial.sine(), [710.0])


def test_grid_never_exceeds_certified_bound():
    rng = np.random.default_rng(5)
    grid = Grid1D(Box([-8.0], [8.0]), 0.05)
    for _ in range(200):
        P = random_real_poly(rng)
        tau = [float(rng.uniform(-50, 50))]
        assert grid_sup_diff(P, tau, grid) <= shift_bound(P, tau)


def test_grid_bound_ordering_single_complex_term():
    # tightest case: |P(x+tau) - P(x)| is constant in x
    grid = Grid1D(Box([-8.0], [8.0]), 0.05)
    rng = np.random.default_rng(6)
    for _ in range(100):
        P = ExpPolynomial(np.array([[float(rng.uniform(0.1, 4))]]),
                          [complex(rng.uniform(-2, 2), rng.uniform(-2, 2))])
        tau = [float(rng.uniform(-20, 20))]
        assert grid_sup_diff(P, tau, grid) <= shift_bound(P, tau)


def test_shift_bound_subadditive():
    rng = np.random.default_rng(8)
    for _ in range(200):
        P = random_real_poly(rng)
        t1, t2 = rng.uniform(-20, 20, 2)
        assert shift_bound(P, [t1 + t2]) <= shift_bound(P, [t1]) + shift_bound(P, [t2]) + 1e-12


def test_shift_bound_even_exactly():
    rng = np.random.default_rng(9)
    for _ in range(100):
        P = random_real_poly(rng, dim=2)
        tau = rng.uniform(-10, 10, 2)
        assert shift_bound(P, -tau) == shift_bound(P, tau)


def test_real_valued_imag_part_small():
    rng = np.random.default_rng(10)
    P = random_real_poly(rng, max_terms=5)
    x = rng.uniform(-100, 100, (1000, 1))
    raw = np.exp(1j * (x @ P.freqs.T)) @ P.coeffs
    assert np.abs(raw.imag).max() <= 1e-12


def test_real_valued_flag_false_for_lopsided_terms():
    P = ExpPolynomial(np.array([[1.0]]), [1.0 + 0j])
    assert not P.real_valued


def test_grid_nodes_cover_box():
    g = Grid1D(Box([0.0], [1.0]), 0.25)
    assert np.allclose(g.nodes_1d(), [0, 0.25, 0.5, 0.75, 1.0])
    g2 = GridND(Box([0.0, 0.0], [1.0, 2.0]), 1.0)
    assert g2.nodes().shape == (6, 2)
    assert default_grid(Box([0.0], [1.0])).step == 1e-3


def test_dimension_mismatch_errors():
    P = ExpPolynomial.sine(dim=2)
    with pytest.raises(ValueError):
        P.evaluate(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        shift_bound(P, [1.0])
