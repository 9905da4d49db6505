"""Dyadic signed counterexample constructions and their numeric witnesses.

For even n != 0 let v(n) be the 2-adic valuation (largest k with 2^k | n)
and place a pair of points at n +- 1/(v(n)+1)^2.  Three samples are built
from these pairs on a window [-N-1, N+1]:

* ``dyadic_signed_set``      masses +v(n) and -v(n)  (variation blows up on
  the dyadic centers 2^k, yet every multiple of 2^level shifts the smoothed
  measure by less than 4M/level: almost periodic in the distribution sense
  but not in the weak sense);
* ``dyadic_unit_signed_set`` masses +1 and -1  (a signed almost periodic
  sample whose positive and negative parts are *not* almost periodic);
* ``dyadic_positive_set``    all points with mass +1 (also not almost
  periodic: the paired offsets never cancel).

The ``verify_*`` functions compute the quantitative witnesses and raise
``VerificationError`` when a claimed bound fails, so the CLI can map them to
its verification exit code.
"""
from __future__ import annotations

import numpy as np

from . import matching, measures
from .ap_functions import Grid1D
from .core_model import Box, PointMultiSet, split_signs
from .matching import MatchPolicy
from .measures import Mollifier


class VerificationError(AssertionError):
    """A quantitative claim checked by a verify_* table does not hold."""


class OddOrZeroInput(ValueError):
    """The 2-adic valuation here is defined for even nonzero integers."""


def two_adic(n: int) -> int:
    """Largest k with 2^k dividing n (n even, nonzero)."""
    n = int(n)
    if n == 0 or n % 2:
        raise OddOrZeroInput("n must be even and nonzero")
    return (abs(n) & -abs(n)).bit_length() - 1


def _dyadic_pairs(N: int):
    """(n, v(n), offset) for even n in [-N, N] \\ {0}."""
    if N < 2:
        raise ValueError("N must be >= 2")
    n = np.concatenate([np.arange(-(N // 2) * 2, 0, 2), np.arange(2, N + 1, 2)])
    v = np.array([two_adic(int(x)) for x in n])
    offset = 1.0 / (v + 1.0) ** 2
    return n, v, offset


def _window(N: int) -> Box:
    return Box([-N - 1.0], [N + 1.0])


def dyadic_signed_set(N: int) -> PointMultiSet:
    """Masses +v(n) at n + 1/(v(n)+1)^2 and -v(n) at n - 1/(v(n)+1)^2."""
    n, v, off = _dyadic_pairs(N)
    pos = np.concatenate([n + off, n - off]).reshape(-1, 1)
    masses = np.concatenate([v, -v])
    return PointMultiSet(pos, masses, _window(N), signed=True,
                         meta={"family": "dyadic-signed", "N": int(N)})


def dyadic_unit_signed_set(N: int) -> PointMultiSet:
    """Masses +1 at n + 1/(v(n)+1)^2 and -1 at n - 1/(v(n)+1)^2."""
    n, _, off = _dyadic_pairs(N)
    pos = np.concatenate([n + off, n - off]).reshape(-1, 1)
    masses = np.concatenate([np.ones(n.size, np.int64), -np.ones(n.size, np.int64)])
    return PointMultiSet(pos, masses, _window(N), signed=True,
                         meta={"family": "dyadic-unit-signed", "N": int(N)})


def dyadic_positive_set(N: int) -> PointMultiSet:
    """Both points of every pair with mass +1 (a positive sample)."""
    n, _, off = _dyadic_pairs(N)
    pos = np.concatenate([n + off, n - off]).reshape(-1, 1)
    masses = np.ones(pos.shape[0], dtype=np.int64)
    return PointMultiSet(pos, masses, _window(N), signed=False,
                         meta={"family": "dyadic-positive", "N": int(N)})


def verify_unbounded_variation(K: int, N: int | None = None):
    """Unit-ball variation at the centers 2^k for k = 1..K.

    The ball around 2^k holds exactly the pair with masses +-k, so the
    variation is >= 2k and grows without bound; checked and returned as rows
    (k, center, variation).
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if N is None:
        N = 2 ** (K + 1)
    if 2 ** K > N:
        raise ValueError("window bound too small: need 2^K <= N")
    A = dyadic_signed_set(N)
    rows = []
    previous = 0
    for k in range(1, K + 1):
        var = measures.variation_in_ball(A, [float(2 ** k)], 1.0)
        rows.append((k, 2 ** k, var))
        if var < 2 * k:
            raise VerificationError(f"variation {var} at 2^{k} below 2k = {2 * k}")
        if var <= previous:
            raise VerificationError("variation failed to increase strictly")
        previous = var
    return rows


def verify_distributional_ap(A: PointMultiSet, phi: Mollifier, levels,
                             grid: Grid1D, tolerance: float = 1e-6,
                             multiples: int = 1):
    """Smoothed shift suprema for tau = (multiples of) 2^level.

    Asserts sup_x |g(x+tau) - g(x)| <= 4M/level + tolerance for each level,
    the distribution-sense almost-periodicity witness.  Requires the bump
    support inside (-1/2, 1/2).  Returns rows (level, tau, sup, bound).
    """
    if not phi.scale < 0.5:
        raise ValueError("the dyadic cancellation argument needs support in (-1/2, 1/2)")
    M = phi.deriv_sup
    rows = []
    for level in levels:
        if level < 1:
            raise ValueError("levels must be >= 1")
        bound = 4.0 * M / level
        for j in range(1, multiples + 1):
            tau = float(j * 2 ** level)
            sup = measures.weak_ap_sup_diff(A, phi, [tau], grid)
            rows.append((int(level), tau, sup, bound))
            if sup > bound + tolerance:
                raise VerificationError(
                    f"sup diff {sup} at tau={tau} exceeds 4M/level = {bound}")
    return rows


def even_offset_residual(A_plus: PointMultiSet, chunk: int = 2_000_000) -> float:
    """max over point pairs of |x - y - 2*round((x - y)/2)|.

    Exhaustive over the window (chunked).  For the dyadic positive part every
    pairwise distance sits within 1/4 of an even integer; the returned
    residual quantifies that gap structure.
    """
    x = np.sort(A_plus.expanded_positions()[:, 0])
    worst = 0.0
    block = max(1, chunk // max(x.size, 1))
    for i in range(0, x.size, block):
        diff = x[i:i + block, None] - x[None, :]
        res = diff - 2.0 * np.round(diff / 2.0)  # self-pairs contribute 0
        worst = max(worst, float(np.abs(res).max()))
    return worst


def positive_part_defect_scan(N: int, eps: float, tau_candidates,
                              policy: MatchPolicy | None = None):
    """Bottleneck values of the positive part of the unit signed sample.

    Runs the windowed matching for every candidate shift and returns
    (min eps*, witness tau, rows).  The scan exhibits the non-almost-
    periodicity: every candidate stays above a positive floor no matter the
    window (the pair offsets differ along dyadic scales, and the hole at 0
    costs any integer shift about two units).
    """
    if not 0 < eps < 0.25:
        raise ValueError("the gap-structure argument needs eps < 1/4")
    taus = [float(t) for t in tau_candidates]
    if any(abs(t) < 1.0 for t in taus):
        raise ValueError("candidates must exclude a neighborhood of 0")
    if policy is None:
        policy = MatchPolicy(margin=300.0)
    plus, _ = split_signs(dyadic_unit_signed_set(N))
    rows = []
    best = None
    for tau in taus:
        report = matching.bottleneck_eps(plus, [tau], policy)
        rows.append((tau, report.eps_star))
        if best is None or report.eps_star < best[1]:
            best = (tau, report.eps_star)
    return best[1], best[0], rows
