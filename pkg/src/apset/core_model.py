"""Windowed multiple discrete sets with integer (possibly signed) masses.

A ``PointMultiSet`` is a finite sample of a discrete set in R^d: points with
nonzero integer multiplicities plus the declared sampling box.  Conventions
shared by the whole package:

* boxes are half-open, lower edge excluded and upper edge included on every
  axis, so counts are exactly additive over box partitions;
* balls are open;
* two input points within ``COINCIDENCE_TOL`` of each other in sup-norm are
  the same point; their masses are summed and zero sums drop out.

The window is a sampling artifact (the underlying sets are infinite), so any
count over a region that is not fully inside the window may be incomplete.
Such queries emit a ``RegionExceedsWindow`` warning instead of failing.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

COINCIDENCE_TOL = 1e-12


class RegionExceedsWindow(UserWarning):
    """The query region is not contained in the window; count may be partial."""


class SignedSetUnsupported(ValueError):
    """Raised by operations defined for positive multiple sets only."""


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Coerce scalars / sequences to a finite 1-d float vector."""
    p = np.atleast_1d(np.asarray(x, dtype=float))
    if p.ndim != 1:
        raise ValueError("a point must be a flat coordinate vector")
    if not np.isfinite(p).all():
        raise ValueError("point coordinates must be finite")
    if dim is not None and p.size != dim:
        raise ValueError(f"expected dimension {dim}, got {p.size}")
    return p


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(eq=False)
class Box:
    """Half-open axis box (lower, upper]: lower excluded, upper included."""

    lower: np.ndarray
    upper: np.ndarray

    def __init__(self, lower, upper):
        self.lower = _freeze(as_point(lower))
        self.upper = _freeze(as_point(upper))
        if self.lower.size != self.upper.size:
            raise ValueError("box corner dimensions differ")
        if not (self.lower < self.upper).all():
            raise ValueError("box must satisfy lower[i] < upper[i] on every axis")

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def sides(self) -> np.ndarray:
        return self.upper - self.lower

    def contains_points(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        return (pts > self.lower).all(axis=1) & (pts <= self.upper).all(axis=1)

    def contains_box(self, other: "Box") -> bool:
        return bool((other.lower >= self.lower).all() and (other.upper <= self.upper).all())

    def contains_ball(self, ball: "Ball") -> bool:
        return bool(
            (ball.center - ball.radius >= self.lower).all()
            and (ball.center + ball.radius <= self.upper).all()
        )

    def translate(self, tau) -> "Box":
        tau = as_point(tau, self.dim)
        return Box(self.lower + tau, self.upper + tau)

    def shrink(self, margin: float) -> "Box | None":
        """Box pulled in by ``margin`` on every side; None when degenerate."""
        if margin < 0:
            raise ValueError("margin must be >= 0")
        lo = self.lower + margin
        hi = self.upper - margin
        if not (lo < hi).all():
            return None
        return Box(lo, hi)

    def intersect(self, other: "Box") -> "Box | None":
        lo = np.maximum(self.lower, other.lower)
        hi = np.minimum(self.upper, other.upper)
        if not (lo < hi).all():
            return None
        return Box(lo, hi)

    def __repr__(self):
        return f"Box({self.lower.tolist()}, {self.upper.tolist()})"


@dataclass(eq=False)
class Ball:
    """Open Euclidean ball."""

    center: np.ndarray
    radius: float

    def __init__(self, center, radius):
        self.center = _freeze(as_point(center))
        self.radius = float(radius)
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")

    @property
    def dim(self) -> int:
        return self.center.size

    def contains_points(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        d2 = ((pts - self.center) ** 2).sum(axis=1)
        return d2 < self.radius * self.radius

    def __repr__(self):
        return f"Ball({self.center.tolist()}, {self.radius})"


def _merge_coincident(positions: np.ndarray, masses: np.ndarray):
    """Merge points closer than COINCIDENCE_TOL (sup-norm), drop zero sums.

    Coincidence is decided on lexicographically consecutive rows, so chains
    merge transitively.  The first row of each group (in sort order) is kept
    as the representative coordinate.
    """
    n = positions.shape[0]
    if n == 0:
        return positions, masses
    order = np.lexsort(positions.T[::-1])
    pos = positions[order]
    mas = masses[order]
    if n > 1:
        same = (np.abs(np.diff(pos, axis=0)) <= COINCIDENCE_TOL).all(axis=1)
        group = np.concatenate([[0], np.cumsum(~same)])
    else:
        group = np.zeros(1, dtype=np.int64)
    starts = np.flatnonzero(np.concatenate([[True], np.diff(group) > 0]))
    summed = np.add.reduceat(mas, starts)
    keep = summed != 0
    return pos[starts[keep]], summed[keep]


class PointMultiSet:
    """Finite window sample of a multiple (optionally signed) discrete set.

    ``positions`` is an (n, d) float array, ``multiplicities`` an (n,) int64
    array with no zeros.  Instances are immutable values: every operation
    returns a new set.  ``meta`` is a free-form dict for generator-attached
    metadata (certified almost periods and the like); it never affects
    equality of the mathematical content.
    """

    def __init__(self, positions, multiplicities, window: Box, signed: bool = False, meta=None):
        positions = np.asarray(positions, dtype=float)
        if positions.ndim == 1:
            positions = positions.reshape(-1, 1)
        if positions.size == 0:
            positions = positions.reshape(0, window.dim)
        if positions.ndim != 2:
            raise ValueError("positions must be an (n, d) array")
        if positions.shape[1] != window.dim:
            raise ValueError("point dimension does not match window dimension")
        if not np.isfinite(positions).all():
            raise ValueError("point coordinates must be finite")
        multiplicities = np.asarray(multiplicities, dtype=np.int64)
        if multiplicities.shape != (positions.shape[0],):
            raise ValueError("need one integer multiplicity per point")

        positions, multiplicities = _merge_coincident(positions, multiplicities)
        if not signed and (multiplicities < 0).any():
            raise ValueError("negative multiplicity in a positive set; pass signed=True")
        inside = window.contains_points(positions) if len(positions) else np.ones(0, bool)
        if not inside.all():
            raise ValueError("all points must lie inside the declared window")

        self.positions = _freeze(positions)
        self.multiplicities = _freeze(multiplicities)
        self.window = window
        self.signed = bool(signed)
        self.meta = dict(meta) if meta else {}

    @property
    def dim(self) -> int:
        return self.window.dim

    @property
    def n_points(self) -> int:
        return self.positions.shape[0]

    def positions_1d(self) -> np.ndarray:
        if self.dim != 1:
            raise ValueError("positions_1d is only defined for d = 1")
        return self.positions[:, 0]

    def expanded_positions(self) -> np.ndarray:
        """Positions with a multiplicity-m point repeated m times (positive sets)."""
        if self.signed:
            raise SignedSetUnsupported("multiplicity expansion needs a positive set")
        return np.repeat(self.positions, self.multiplicities, axis=0)

    def items(self):
        for p, m in zip(self.positions, self.multiplicities):
            yield p, int(m)

    def __repr__(self):
        kind = "signed" if self.signed else "positive"
        return f"PointMultiSet({self.n_points} {kind} points, dim={self.dim}, window={self.window})"


def card_in(A: PointMultiSet, region) -> int:
    """Multiplicity-weighted count of A in a region (signed sum when signed).

    Boxes use the global half-open convention, balls are open.  If the region
    is not contained in A's window the count may be incomplete and a
    ``RegionExceedsWindow`` warning is emitted.
    """
    if isinstance(region, Box):
        if region.dim != A.dim:
            raise ValueError("region dimension mismatch")
        if not A.window.contains_box(region):
            warnings.warn("region exceeds the sampled window; count may be partial",
                          RegionExceedsWindow, stacklevel=2)
    elif isinstance(region, Ball):
        if region.dim != A.dim:
            raise ValueError("region dimension mismatch")
        if not A.window.contains_ball(region):
            warnings.warn("ball exceeds the sampled window; count may be partial",
                          RegionExceedsWindow, stacklevel=2)
    else:
        raise TypeError("region must be a Box or a Ball")
    if A.n_points == 0:
        return 0
    mask = region.contains_points(A.positions)
    return int(A.multiplicities[mask].sum())


def translate(A: PointMultiSet, tau) -> PointMultiSet:
    """Shift every point and the window by tau; multiplicities unchanged."""
    tau = as_point(tau, A.dim)
    return PointMultiSet(A.positions + tau, A.multiplicities,
                         A.window.translate(tau), signed=A.signed, meta=A.meta)


def split_signs(A: PointMultiSet):
    """Split into (positive part, negated negative part); both positive sets."""
    pos = A.multiplicities > 0
    neg = ~pos
    plus = PointMultiSet(A.positions[pos], A.multiplicities[pos], A.window,
                         signed=False, meta=A.meta)
    minus = PointMultiSet(A.positions[neg], -A.multiplicities[neg], A.window,
                          signed=False, meta=A.meta)
    return plus, minus


def inner_window(A: PointMultiSet, margin: float) -> PointMultiSet:
    """Restrict to points at distance >= margin from the window boundary."""
    if margin < 0:
        raise ValueError("margin must be >= 0")
    if margin == 0:
        return A
    if not margin < A.window.sides.min() / 2:
        raise ValueError("margin must be smaller than half the smallest window side")
    shrunk = A.window.shrink(margin)
    mask = shrunk.contains_points(A.positions) if A.n_points else np.ones(0, bool)
    return PointMultiSet(A.positions[mask], A.multiplicities[mask], shrunk,
                         signed=A.signed, meta=A.meta)
