import math

import numpy as np
import pytest

from apset import (ExpPolynomial, KroneckerSystem, common_integer_almost_periods,
                   max_gap, shift_bound, solve_system)
from apset.kronecker import _candidates_single_freq, _residual, delta_for_eps

from conftest import zero_poly


def as_set(solutions):
    return set(tuple(int(v) for v in r) for r in solutions)


def test_two_pi_frequency_accepts_all_integers():
    sys = KroneckerSystem([[2 * math.pi]], delta=1e-6, search_bound=50)
    got = as_set(solve_system(sys))
    assert got == set((r,) for r in range(-50, 51))


def test_unit_frequency_delta_1e4_contains_710():
    sys = KroneckerSystem([[1.0]], delta=1e-4, search_bound=1000)
    got = as_set(solve_system(sys))
    assert got == {(-710,), (0,), (710,)}


def test_unit_frequency_tiny_delta_only_zero():
    sys = KroneckerSystem([[1.0]], delta=1e-9, search_bound=100)
    assert as_set(solve_system(sys)) == {(0,)}


def test_solutions_sorted_by_sup_norm():
    sys = KroneckerSystem([[2 * math.pi]], delta=1e-6, search_bound=3)
    sups = [int(np.abs(r).max()) for r in solve_system(sys)]
    assert sups == sorted(sups)


def test_empty_result_is_not_an_error():
    sys = KroneckerSystem([[1.0]], delta=1e-12, search_bound=3)
    got = solve_system(sys)
    assert as_set(got) == {(0,)}  # 0 always solves
    assert max_gap([float(r[0]) for r in got]) == math.inf


def test_dimension_and_size_limits():
    with pytest.raises(ValueError):
        solve_system(KroneckerSystem([[1.0] * 4], delta=0.1, search_bound=2))
    with pytest.raises(ValueError):
        solve_system(KroneckerSystem([[1.0, 0.0]], delta=0.1, search_bound=100_000))


def test_fast_candidate_path_matches_exhaustive():
    freq, delta, bound = 1.0, 1e-2, 5000
    cands = _candidates_single_freq(freq, delta, bound)
    fast = cands[_residual(cands, np.array([[freq]])) < delta]
    sys = KroneckerSystem([[freq]], delta=delta, search_bound=bound)
    exhaustive = np.array([r[0] for r in solve_system(sys)])
    assert set(int(v) for v in fast[:, 0]) == set(int(v) for v in exhaustive)


def test_frozen_gap_oracle_unit_frequency():
    # brute-force oracle run: delta=1e-2, B=1e4 gives 85 solutions, gap 333
    sys = KroneckerSystem([[1.0]], delta=1e-2, search_bound=10_000)
    sols = [float(r[0]) for r in solve_system(sys)]
    assert len(sols) == 85
    assert max_gap(sols) == 333.0


def test_common_periods_zero_perturbation():
    got = common_integer_almost_periods([zero_poly()], eps=0.5, bound=4)
    assert as_set(got) == set((r,) for r in range(-4, 5))


def test_common_periods_sine_contains_710():
    F = [ExpPolynomial.sine(amplitude=0.2)]
    got = as_set(common_integer_almost_periods(F, eps=1e-4, bound=1000))
    assert (710,) in got and (0,) in got


def test_common_periods_two_pi_all_integers():
    F = [ExpPolynomial.sine(amplitude=1.0, frequency=2 * math.pi)]
    got = as_set(common_integer_almost_periods(F, eps=1e-6, bound=20))
    assert got == set((r,) for r in range(-20, 21))


def test_returned_periods_satisfy_certified_bound():
    F = [ExpPolynomial.sine(amplitude=0.3), ExpPolynomial.cosine(amplitude=0.5, frequency=0.7)]
    eps = 0.05
    for r in common_integer_almost_periods(F, eps, bound=500):
        for P in F:
            assert shift_bound(P, r.astype(float)) < eps


def test_solution_set_symmetric_and_contains_zero():
    sys = KroneckerSystem([[1.0], [0.5]], delta=0.3, search_bound=200)
    got = as_set(solve_system(sys))
    assert (0,) in got
    assert all((-r[0],) in got for r in got)


def test_monotone_in_delta():
    small = as_set(solve_system(KroneckerSystem([[1.0]], 1e-3, 1000)))
    large = as_set(solve_system(KroneckerSystem([[1.0]], 1e-2, 1000)))
    assert small <= large


def test_group_subadditivity_at_double_delta():
    delta = 0.05
    freqs = np.array([[1.0], [math.sqrt(2)]])
    sols = solve_system(KroneckerSystem(freqs, delta, 300))
    vals = [int(r[0]) for r in sols]
    for r1 in vals:
        for r2 in vals:
            s = r1 + r2
            if abs(s) <= 300:
                assert _residual(np.array([[s]]), freqs)[0] < 2 * delta


def test_delta_for_eps_is_conservative():
    F = [ExpPolynomial.sine(amplitude=0.2)]
    delta = delta_for_eps(F, 1e-4)
    assert delta == pytest.approx(1e-4 / 0.2)


def test_max_gap_examples():
    assert max_gap(np.arange(0, 101, 5), (0, 100)) == 5.0
    assert max_gap([3.0]) == math.inf
    assert max_gap([1.0, 2.0, 9.0], (0, 5)) == 1.0  # 9 falls outside the range


def test_2d_system():
    sys = KroneckerSystem([[2 * math.pi, 0.0], [0.0, 2 * math.pi]], delta=1e-9, search_bound=3)
    got = as_set(solve_system(sys))
    assert got == {(i, j) for i in range(-3, 4) for j in range(-3, 4)}
