# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: 1-d bottleneck matching and bump-train evaluation.

Mirror of ``apset._kernels_py``; both backends implement the same exact
floating-point predicates, so they return identical values.
"""
from libc.math cimport ceil, exp, fabs, floor

import numpy as np

cdef extern from *:
    """
    #include <string.h>
    static long long apset_d2i(double x) { long long i; memcpy(&i, &x, 8); return i; }
    static double apset_i2d(long long i) { double x; memcpy(&x, &i, 8); return x; }
    """
    long long apset_d2i(double x) nogil
    double apset_i2d(long long i) nogil

cdef double INF = float("inf")


cdef bint _ok(double d, double eps, bint strict) nogil:
    if strict:
        return d < eps
    return d <= eps


cdef bint _feasible(const double[::1] left, const double[::1] right,
                    double eps, bint strict) nogil:
    cdef Py_ssize_t m = left.shape[0]
    cdef Py_ssize_t n = right.shape[0]
    cdef Py_ssize_t i, j = 0
    cdef double d
    if m == 0:
        return True
    if m > n or n == 0:
        return False
    for i in range(m):
        while j < n:
            d = fabs(right[j] - left[i])
            if _ok(d, eps, strict):
                break
            if right[j] >= left[i]:
                return False  # past the admissible band, nothing matches
            j += 1
        if j == n:
            return False
        j += 1
    return True


def feasible_1d(left, right, double eps, bint strict=False):
    """Injective matchability of sorted ``left`` into sorted ``right`` within eps."""
    cdef const double[::1] l = np.ascontiguousarray(left, dtype=np.float64)
    cdef const double[::1] r = np.ascontiguousarray(right, dtype=np.float64)
    return bool(_feasible(l, r, eps, strict))


def greedy_matching_1d(left, right, double eps, bint strict=False):
    """Right indices of the greedy matching; -1 marks an unmatchable left point."""
    cdef const double[::1] l = np.ascontiguousarray(left, dtype=np.float64)
    cdef const double[::1] r = np.ascontiguousarray(right, dtype=np.float64)
    cdef Py_ssize_t m = l.shape[0]
    cdef Py_ssize_t n = r.shape[0]
    out = np.full(m, -1, dtype=np.int64)
    cdef long long[::1] o = out
    cdef Py_ssize_t i, j = 0
    cdef double d
    if m == 0 or n == 0 or m > n:
        return out
    for i in range(m):
        while j < n:
            d = fabs(r[j] - l[i])
            if _ok(d, eps, strict):
                break
            if r[j] >= l[i]:
                return out
            j += 1
        if j == n:
            return out
        o[i] = j
        j += 1
    return out


def bottleneck_1d(left, right, double cap=INF):
    """Exact one-sided bottleneck value; inf when infeasible at cap."""
    cdef const double[::1] l = np.ascontiguousarray(left, dtype=np.float64)
    cdef const double[::1] r = np.ascontiguousarray(right, dtype=np.float64)
    cdef long long lo, hi, mid
    if l.shape[0] == 0:
        return 0.0
    if l.shape[0] > r.shape[0] or r.shape[0] == 0:
        return INF
    if not _feasible(l, r, cap, False):
        return INF
    if _feasible(l, r, 0.0, False):
        return 0.0
    lo = 0
    hi = apset_d2i(cap)
    while lo < hi:
        mid = lo + (hi - lo) // 2
        if _feasible(l, r, apset_i2d(mid), False):
            hi = mid
        else:
            lo = mid + 1
    return apset_i2d(lo)


def bump_train(double x0, double step, Py_ssize_t count, points, masses, double scale):
    """Mass-weighted bump train on the uniform grid x0 + i*step."""
    cdef const double[::1] p = np.ascontiguousarray(points, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(masses, dtype=np.float64)
    out = np.zeros(count)
    cdef double[::1] o = out
    cdef Py_ssize_t k, i, i0, i1
    cdef double u, t, x, pk, mk
    for k in range(p.shape[0]):
        pk = p[k]
        mk = w[k]
        i0 = <Py_ssize_t>ceil((pk - scale - x0) / step)
        if i0 < 0:
            i0 = 0
        i1 = <Py_ssize_t>floor((pk + scale - x0) / step)
        if i1 > count - 1:
            i1 = count - 1
        for i in range(i0, i1 + 1):
            x = x0 + i * step
            u = (x - pk) / scale
            t = 1.0 - u * u
            if t > 0.0:
                o[i] += mk * exp(1.0 - 1.0 / t)
    return out
