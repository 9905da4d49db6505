"""Backend parity: the NumPy fallback and the compiled kernels must agree."""
import itertools

import numpy as np
import pytest

from apset import kernels
from apset import _kernels_py


def brute_bottleneck(left, right):
    m = len(left)
    if m == 0:
        return 0.0
    if m > len(right):
        return np.inf
    best = np.inf
    for per in itertools.permutations(range(len(right)), m):
        worst = max(abs(left[i] - right[per[i]]) for i in range(m))
        best = min(best, worst)
    return best


def random_instance(rng, clustered=False):
    m = int(rng.integers(0, 8))
    n = int(rng.integers(m, 8))
    if clustered:
        pool = np.array([0.0, 1.0, 1.0 + 2.0 ** -52, 2.0, 2.5])
        left = np.sort(rng.choice(pool, m))
        right = np.sort(rng.choice(pool, n))
    else:
        left = np.sort(rng.uniform(-10, 10, m))
        right = np.sort(rng.uniform(-10, 10, n))
    return left, right


def test_python_bottleneck_equals_brute_force():
    rng = np.random.default_rng(0)
    for trial in range(400):
        left, right = random_instance(rng, clustered=trial % 3 == 0)
        got = _kernels_py.bottleneck_1d(left, right)
        want = brute_bottleneck(left, right)
        assert got == want or (np.isinf(got) and np.isinf(want))


@pytest.mark.skipif(kernels.BACKEND != "native", reason="extension not built")
def test_backends_agree_exactly():
    from apset import _native

    rng = np.random.default_rng(1)
    for trial in range(400):
        left, right = random_instance(rng, clustered=trial % 4 == 0)
        eps = float(rng.uniform(0, 5))
        for strict in (False, True):
            assert (_native.feasible_1d(left, right, eps, strict)
                    == _kernels_py.feasible_1d(left, right, eps, strict))
            np.testing.assert_array_equal(
                _native.greedy_matching_1d(left, right, eps, strict),
                _kernels_py.greedy_matching_1d(left, right, eps, strict))
        a = _native.bottleneck_1d(left, right)
        b = _kernels_py.bottleneck_1d(left, right)
        assert a == b or (np.isinf(a) and np.isinf(b))


@pytest.mark.skipif(kernels.BACKEND != "native", reason="extension not built")
def test_bump_train_backends_agree():
    from apset import _native

    rng = np.random.default_rng(2)
    pts = np.sort(rng.uniform(-10, 10, 200))
    masses = rng.integers(-3, 4, 200).astype(float)
    a = _native.bump_train(-12.0, 1e-3, 24001, pts, masses, 0.4)
    b = _kernels_py.bump_train(-12.0, 1e-3, 24001, pts, masses, 0.4)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


def test_bump_train_values():
    # single unit mass at 0, scale 1: phi(0) = 1, phi(+-1) = 0
    vals = kernels.bump_train(-2.0, 0.5, 9, np.array([0.0]), np.array([1.0]), 1.0)
    assert vals[4] == 1.0
    assert vals[0] == vals[2] == vals[6] == vals[8] == 0.0
    assert 0 < vals[3] < 1 and vals[3] == vals[5]


def test_greedy_matching_is_lexicographically_smallest():
    left = np.array([0.0, 1.0])
    right = np.array([-0.5, 0.5, 1.5])
    match = kernels.greedy_matching_1d(left, right, 0.75)
    assert match.tolist() == [0, 1]


def test_cap_respected():
    left = np.array([0.0])
    right = np.array([2.0])
    assert np.isinf(kernels.bottleneck_1d(left, right, cap=1.0))
    assert kernels.bottleneck_1d(left, right, cap=3.0) == 2.0
