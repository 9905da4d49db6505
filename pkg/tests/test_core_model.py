import numpy as np
import pytest

from apset import (Ball, Box, PointMultiSet, RegionExceedsWindow, card_in,
                   inner_window, split_signs, translate)
from apset.signed_examples import dyadic_signed_set, dyadic_unit_signed_set

from conftest import integer_line


def test_box_validation():
    with pytest.raises(ValueError):
        Box([0.0], [0.0])
    with pytest.raises(ValueError):
        Box([0.0, 1.0], [1.0])
    b = Box([0.0, 0.0], [2.0, 3.0])
    assert b.dim == 2
    assert b.sides.tolist() == [2.0, 3.0]


def test_box_halfopen_convention():
    b = Box([0.0], [1.0])
    inside = b.contains_points(np.array([[0.0], [0.5], [1.0], [1.5]]))
    assert inside.tolist() == [False, True, True, False]


def test_ball_is_open():
    ball = Ball([0.0], 1.0)
    inside = ball.contains_points(np.array([[0.0], [0.999999], [1.0]]))
    assert inside.tolist() == [True, True, False]


def test_coincident_points_merge():
    w = Box([-1.0], [1.0])
    A = PointMultiSet([[0.5], [0.5 + 1e-13], [0.25]], [1, 2, 3], w)
    assert A.n_points == 2
    masses = dict((float(p[0]), m) for p, m in A.items())
    assert masses[0.25] == 3
    assert 3 in masses.values() and sum(masses.values()) == 6


def test_zero_sum_merge_deleted():
    w = Box([-1.0], [1.0])
    A = PointMultiSet([[0.5], [0.5]], [2, -2], w, signed=True)
    assert A.n_points == 0


def test_negative_mass_requires_signed():
    w = Box([-1.0], [1.0])
    with pytest.raises(ValueError):
        PointMultiSet([[0.0]], [-1], w)


def test_points_outside_window_rejected():
    with pytest.raises(ValueError):
        PointMultiSet([[2.0]], [1], Box([-1.0], [1.0]))


def test_card_in_integer_interval():
    A = integer_line(10)
    assert card_in(A, Box([0.0], [3.0])) == 3  # (0, 3] -> {1, 2, 3}


def test_card_in_signed_ball_cancels():
    A = dyadic_signed_set(16)  # masses +2 at 12+1/9, -2 at 12-1/9
    assert card_in(A, Ball([12.0], 0.5)) == 0


def test_card_in_empty_intersection():
    A = integer_line(10)
    assert card_in(A, Box([0.1], [0.9])) == 0


def test_card_in_warns_outside_window():
    A = integer_line(10)
    with pytest.warns(RegionExceedsWindow):
        card_in(A, Box([5.0], [50.0]))
    with pytest.warns(RegionExceedsWindow):
        card_in(A, Ball([10.0], 1.0))


def test_card_additive_over_disjoint_boxes():
    rng = np.random.default_rng(7)
    w = Box([-5.0, -5.0], [5.0, 5.0])
    pts = rng.uniform(-5, 5, size=(300, 2))
    A = PointMultiSet(pts, rng.integers(1, 4, 300), w)
    for _ in range(50):
        lo = rng.uniform(-5, 0, 2)
        hi = lo + rng.uniform(0.5, 4.5, 2)
        axis = rng.integers(0, 2)
        cut = rng.uniform(lo[axis], hi[axis])
        hi1 = hi.copy(); hi1[axis] = cut
        lo2 = lo.copy(); lo2[axis] = cut
        whole = card_in(A, Box(lo, hi))
        assert whole == card_in(A, Box(lo, hi1)) + card_in(A, Box(lo2, hi))


def test_translate_identity_and_inverse():
    A = integer_line(10)
    same = translate(A, [0.0])
    assert np.array_equal(same.positions, A.positions)
    back = translate(translate(A, [3.0]), [-3.0])
    assert np.array_equal(back.positions, A.positions)
    assert np.array_equal(back.multiplicities, A.multiplicities)


def test_translate_lattice_overlap():
    A = integer_line(10)
    shifted = translate(A, [1.0])
    common = set(A.positions_1d()) & set(shifted.positions_1d())
    assert common == set(float(k) for k in range(-9, 11))


def test_translate_count_covariance():
    rng = np.random.default_rng(3)
    w = Box([-5.0], [5.0])
    A = PointMultiSet(rng.uniform(-5, 5, (100, 1)), np.ones(100, np.int64), w)
    for _ in range(20):
        tau = rng.uniform(-2, 2)
        lo = rng.uniform(-5, 2)
        region = Box([lo], [lo + 1.7])
        assert card_in(translate(A, [tau]), region.translate([tau])) == card_in(A, region)


def test_split_signs_roundtrip():
    A = dyadic_unit_signed_set(64)
    plus, minus = split_signs(A)
    assert not plus.signed and not minus.signed
    assert (plus.multiplicities > 0).all() and (minus.multiplicities > 0).all()
    rebuilt = PointMultiSet(
        np.concatenate([plus.positions, minus.positions]),
        np.concatenate([plus.multiplicities, -minus.multiplicities]),
        A.window, signed=True)
    assert rebuilt.n_points == A.n_points
    rng = np.random.default_rng(11)
    for _ in range(25):
        lo = rng.uniform(-60, 50)
        region = Box([lo], [lo + rng.uniform(0.5, 10)])
        assert card_in(A, region) == card_in(plus, region) - card_in(minus, region)


def test_split_signs_positive_set():
    A = integer_line(5)
    plus, minus = split_signs(A)
    assert plus.n_points == A.n_points
    assert minus.n_points == 0


def test_inner_window_examples():
    A = integer_line(10)
    assert inner_window(A, 0.0) is A
    trimmed = inner_window(A, 2.5)
    assert set(trimmed.positions_1d()) == set(float(k) for k in range(-7, 8))
    with pytest.raises(ValueError):
        inner_window(A, 10.2)


def test_meta_is_carried_not_required():
    A = integer_line(4)
    assert "lattice" in A.meta
    B = translate(A, [1.0])
    assert B.meta == A.meta
