"""NumPy implementations of the hot kernels.

``apset._native`` (Cython) mirrors every function here; ``apset.kernels``
picks the backend at import time.  All matching routines decide pairs by the
exact floating-point predicate ``abs(r - l) <= eps`` (or ``<`` when strict),
so results agree bit for bit with brute-force oracles and with the compiled
backend.
"""
from __future__ import annotations

import numpy as np

_INT = np.int64


def _bits(x: float) -> int:
    return int(np.array(float(x), dtype=np.float64).view(_INT))


def _from_bits(b: int) -> float:
    return float(np.array(b, dtype=_INT).view(np.float64))


def _first_admissible(left, right, eps, strict):
    """Smallest right index whose distance to each left point passes the predicate.

    searchsorted lands within an ulp of the band edge; the two repair loops
    walk over rounding boundaries and plateaus of equal values so the result
    is exact for the abs-diff predicate.
    """
    n = right.size
    a = np.searchsorted(right, left - eps, side="left")
    a = np.minimum(a, n - 1)

    def ok(idx):
        d = np.abs(right[idx] - left)
        return (d < eps) if strict else (d <= eps)

    while True:
        back = (a > 0) & ok(np.maximum(a - 1, 0))
        if not back.any():
            break
        a[back] -= 1
    while True:
        fwd = (~ok(a)) & (right[a] < left) & (a < n - 1)
        if not fwd.any():
            break
        a[fwd] += 1
    return a


def feasible_1d(left, right, eps: float, strict: bool = False) -> bool:
    """Can every left point be matched injectively into right within eps?

    Both arrays must be sorted ascending.  Greedy first-fit on the interval
    bigraph; O(m + n) after the searchsorted.
    """
    left = np.ascontiguousarray(left, dtype=float)
    right = np.ascontiguousarray(right, dtype=float)
    m, n = left.size, right.size
    if m == 0:
        return True
    if m > n or n == 0:
        return False
    a = _first_admissible(left, right, eps, strict)
    idx = np.arange(m)
    j = np.maximum.accumulate(a - idx) + idx
    if j[-1] > n - 1:
        return False
    d = np.abs(right[j] - left)
    return bool((d < eps).all()) if strict else bool((d <= eps).all())


def greedy_matching_1d(left, right, eps: float, strict: bool = False) -> np.ndarray:
    """Right indices of the greedy (lexicographically smallest) matching.

    Entry i is the partner of left[i], or -1 when left[i] cannot be matched
    (the instance is then infeasible at eps).
    """
    left = np.ascontiguousarray(left, dtype=float)
    right = np.ascontiguousarray(right, dtype=float)
    m, n = left.size, right.size
    out = np.full(m, -1, dtype=_INT)
    if m == 0 or n == 0 or m > n:
        return out
    a = _first_admissible(left, right, eps, strict)
    idx = np.arange(m)
    j = np.maximum.accumulate(a - idx) + idx
    d = np.abs(right[np.minimum(j, n - 1)] - left)
    good = (j <= n - 1) & ((d < eps) if strict else (d <= eps))
    bad = np.flatnonzero(~good)
    if bad.size:  # greedy walk stops at the first unmatchable left point
        good[bad[0]:] = False
    out[good] = j[good]
    return out


def bottleneck_1d(left, right, cap: float = np.inf) -> float:
    """Exact one-sided bottleneck value min over injections of max |l - r|.

    Arrays sorted ascending.  Returns inf when no matching with value <= cap
    exists.  The result is the minimal feasible double, i.e. an attained
    pairwise distance; found by binary search on the bit representation.
    """
    left = np.ascontiguousarray(left, dtype=float)
    right = np.ascontiguousarray(right, dtype=float)
    if left.size == 0:
        return 0.0
    if left.size > right.size or right.size == 0:
        return np.inf
    if not feasible_1d(left, right, cap):
        return np.inf
    if feasible_1d(left, right, 0.0):
        return 0.0
    lo, hi = 0, _bits(cap)
    while lo < hi:
        mid = lo + (hi - lo) // 2
        if feasible_1d(left, right, _from_bits(mid)):
            hi = mid
        else:
            lo = mid + 1
    return _from_bits(lo)


def bump_train(x0: float, step: float, count: int, points, masses, scale: float) -> np.ndarray:
    """sum_j masses[j] * phi((x_i - points[j]) / scale) on the uniform grid
    x_i = x0 + i*step, i = 0..count-1, with the standard bump
    phi(u) = exp(1 - 1/(1 - u^2)) for |u| < 1, else 0.
    """
    points = np.asarray(points, dtype=float)
    masses = np.asarray(masses, dtype=float)
    out = np.zeros(count)
    for p, m in zip(points, masses):
        i0 = max(int(np.ceil((p - scale - x0) / step)), 0)
        i1 = min(int(np.floor((p + scale - x0) / step)), count - 1)
        if i1 < i0:
            continue
        x = x0 + step * np.arange(i0, i1 + 1)
        u = (x - p) / scale
        t = 1.0 - u * u
        vals = np.zeros(t.size)
        pos = t > 0.0
        vals[pos] = np.exp(1.0 - 1.0 / t[pos])
        out[i0:i1 + 1] += m * vals
    return out
