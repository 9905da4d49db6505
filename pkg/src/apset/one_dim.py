"""Sorted indexing, counting function, and slope/remainder decomposition on R.

For a positive 1-d sample the points are expanded by multiplicity and
indexed in nondecreasing order with the anchor a_0 = smallest element >= 0
(the data is never translated; the anchor offset a_0 is reported instead).

``decompose`` splits a_k = D_hat * k + f(k): D_hat is the endpoint slope
refined by least squares, f the remainder sampled at integer indices.  The
identity holds exactly by construction; the substantive question -- whether
f is (almost) periodic -- is probed by ``f_shift_quality`` and reported,
never asserted.  ``discrepancy`` measures sup |card(A in (x, x+h]) - D*h|
against the 4*M benchmark coming from the unit-ball mass bound M.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_model import PointMultiSet, SignedSetUnsupported


@dataclass(eq=False)
class SortedLine:
    """Nondecreasing multiplicity-expanded values with the a_0 anchor."""

    values: np.ndarray
    zero_pos: int  # array position of a_0
    source: PointMultiSet

    @property
    def k_min(self) -> int:
        return -self.zero_pos

    @property
    def k_max(self) -> int:
        return self.values.size - 1 - self.zero_pos

    @property
    def anchor_offset(self) -> float:
        """a_0 itself; the data is indexed in place, never translated."""
        return float(self.values[self.zero_pos])

    def value_at(self, k: int) -> float:
        if not self.k_min <= k <= self.k_max:
            raise IndexError(f"index {k} outside [{self.k_min}, {self.k_max}]")
        return float(self.values[self.zero_pos + k])

    def index_range(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)


def sort_line(A: PointMultiSet) -> SortedLine:
    """Sorted, multiplicity-expanded, anchored view of a positive 1-d sample."""
    if A.dim != 1:
        raise ValueError("sort_line needs a 1-d sample")
    if A.signed:
        raise SignedSetUnsupported("sorted indexing expands multiplicities; "
                                   "split a signed sample first")
    values = np.sort(A.expanded_positions()[:, 0])
    if values.size == 0:
        raise ValueError("empty sample")
    zero_pos = int(np.searchsorted(values, 0.0, side="left"))
    if zero_pos == values.size:
        raise ValueError("no element >= 0; the anchor convention needs one")
    return SortedLine(values=values, zero_pos=zero_pos, source=A)


def counting(line: SortedLine, t: float) -> int:
    """n(t) = card(A in (0, t]) for t > 0, -card(A in (t, 0]) for t < 0, n(0) = 0.

    Half-open intervals follow the global convention, so for t < 0 a point
    at 0 belongs to (t, 0] and contributes.  Consistent with card_in.
    """
    v = line.values
    if not (line.source.window.lower[0] < t <= line.source.window.upper[0]) and t != 0.0:
        raise ValueError("t outside the sampled window")
    if t == 0.0:
        return 0
    right_t = int(np.searchsorted(v, t, side="right"))
    right_0 = int(np.searchsorted(v, 0.0, side="right"))
    return right_t - right_0  # negative for t < 0: -(count in (t, 0])


def _interval_counts(line: SortedLine, x: np.ndarray, h: np.ndarray) -> np.ndarray:
    v = line.values
    return (np.searchsorted(v, x + h, side="right")
            - np.searchsorted(v, x, side="right"))


def discrepancy(line: SortedLine, slope: float, x_samples, h_samples) -> float:
    """sup over sample pairs of |card(A in (x, x+h]) - slope * h|."""
    x = np.asarray(x_samples, dtype=float)
    h = np.asarray(h_samples, dtype=float)
    if x.shape != h.shape:
        raise ValueError("x and h samples must pair up")
    if not (h > 0).all():
        raise ValueError("interval lengths must be positive")
    lo = line.source.window.lower[0]
    hi = line.source.window.upper[0]
    if (x < lo).any() or (x + h > hi).any():
        raise ValueError("sample interval leaves the window")
    counts = _interval_counts(line, x, h)
    return float(np.abs(counts - slope * h).max())


@dataclass(eq=False)
class IndexedSamples:
    """A function sampled on a contiguous integer index range."""

    k_min: int
    values: np.ndarray

    @property
    def k_max(self) -> int:
        return self.k_min + self.values.size - 1

    def value_at(self, k: int) -> float:
        if not self.k_min <= k <= self.k_max:
            raise IndexError(f"index {k} outside [{self.k_min}, {self.k_max}]")
        return float(self.values[k - self.k_min])


@dataclass(eq=False)
class DecomposeResult:
    slope: float               # D_hat
    remainder: IndexedSamples  # f(k) = a_k - D_hat * k
    anchor_offset: float
    discrepancy_value: float   # quality gate at D_hat over a deterministic sample


def _quality_samples(line: SortedLine):
    """Deterministic (x, h) pairs spanning the window for the quality gate."""
    lo = float(line.source.window.lower[0])
    hi = float(line.source.window.upper[0])
    width = hi - lo
    xs, hs = [], []
    for frac in np.linspace(0.02, 0.6, 30):
        h = frac * width / 2
        for t in np.linspace(0.01, 0.98, 40):
            x = lo + t * (width - h)
            if x + h <= hi:
                xs.append(x)
                hs.append(h)
    return np.array(xs), np.array(hs)


def decompose(line: SortedLine) -> DecomposeResult:
    """Estimate the slope and return the integer-indexed remainder.

    Endpoint slope (a_kmax - a_kmin)/(kmax - kmin) refined by a least-squares
    fit of a_k against k.  No snapping: the estimation error is visible in
    the report, not hidden.
    """
    if line.values.size < 2:
        raise ValueError("need at least two points to estimate a slope")
    k = line.index_range().astype(float)
    a = line.values
    slope = np.polyfit(k, a, 1)[0]
    f = a - slope * k
    x, h = _quality_samples(line)
    quality = discrepancy(line, slope, x, h)
    return DecomposeResult(
        slope=float(slope),
        remainder=IndexedSamples(k_min=line.k_min, values=f),
        anchor_offset=line.anchor_offset,
        discrepancy_value=quality,
    )


def f_shift_quality(f: IndexedSamples, q: int) -> float:
    """sup over valid m of |f(m + q) - f(m)|; small values witness good shifts."""
    q = int(q)
    n = f.values.size
    if not 0 < abs(q) < n:
        raise ValueError("shift must be a nonzero index inside the sampled range")
    s = abs(q)
    return float(np.abs(f.values[s:] - f.values[:-s]).max())


def shift_quality_table(result: DecomposeResult, taus) -> list[tuple[float, int, float]]:
    """Pair each accepted real shift tau with q = round(tau / D_hat).

    Surfaces the mechanism behind the decomposition: near every real almost
    period there is an integer index shift of comparable quality.  Shifts
    whose q leaves the sampled range are skipped.
    """
    rows = []
    for tau in taus:
        q = int(round(float(tau) / result.slope))
        if q == 0 or abs(q) >= result.remainder.values.size:
            continue
        rows.append((float(tau), q, f_shift_quality(result.remainder, q)))
    return rows
