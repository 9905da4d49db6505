#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Workloads mirror the heavy paths of the package: bottleneck shift scans on a
20001-point perturbed-lattice window and bump-train evaluation on a dense
convolution grid.  Run after an editable install:

    python benchmarks/bench_kernels.py
"""
import time

import numpy as np

from apset import _kernels_py

try:
    from apset import _native
except ImportError:
    _native = None

BACKENDS = [("python", _kernels_py)] + ([("native", _native)] if _native else [])


def timed(fn, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_bottleneck(impl):
    k = np.arange(-10_000, 10_001)
    base = np.asarray(k + 0.2 * np.sin(k), dtype=float)
    taus = 0.1 * np.arange(1, 51)

    def run():
        total = 0.0
        for tau in taus:
            left = base[2000:-2000] + tau
            total += impl.bottleneck_1d(left, base, 100.0)
        return total

    return run


def bench_feasibility(impl):
    k = np.arange(-10_000, 10_001)
    base = np.asarray(k + 0.2 * np.sin(k), dtype=float)
    taus = 0.1 * np.arange(1, 2001)

    def run():
        hits = 0
        for tau in taus:
            left = base[2000:-2000] + tau
            hits += impl.feasible_1d(left, base, 1e-9, False)
        return hits

    return run


def bench_bump_train(impl):
    n = np.concatenate([np.arange(-8192, 0, 2), np.arange(2, 8193, 2)])
    v = np.array([(abs(int(x)) & -abs(int(x))).bit_length() - 1 for x in n])
    off = 1.0 / (v + 1.0) ** 2
    pts = np.sort(np.concatenate([n + off, n - off]))
    masses = np.ones(pts.size)

    def run():
        out = impl.bump_train(-2000.0, 1e-3, 4_000_001, pts, masses, 0.4)
        return float(out.sum())

    return run


def main():
    workloads = [
        ("bottleneck_1d, 50 shifts x 20001 points", bench_bottleneck),
        ("feasible_1d, 2000 shifts x 20001 points", bench_feasibility),
        ("bump_train, 16384 bumps on 4e6 nodes", bench_bump_train),
    ]
    print(f"{'workload':<45} {'backend':<8} {'seconds':>9}  speedup")
    for name, make in workloads:
        reference = None
        for backend, impl in BACKENDS:
            seconds, result = timed(make(impl))
            if reference is None:
                reference = seconds
                speed = ""
            else:
                speed = f"x{reference / seconds:.1f}"
            print(f"{name:<45} {backend:<8} {seconds:>9.3f}  {speed}")
    if _native is None:
        print("note: compiled extension not importable; python numbers only")


if __name__ == "__main__":
    main()
