"""Windowed bottleneck-matching almost-period tests, densities, card bounds.

The infinite-set criterion asks for a bijection s with |a + tau - a_s| < eps
for all points.  On a finite window a literal bijection is distorted by the
up-to-M*(1+|tau|/L) points that flow across the boundary, so eps*(tau) is
defined as the larger of two one-sided values:

  (i)  every inner point of the shifted set matched injectively into the
       base sample within eps,
  (ii) every inner point of the base sample matched injectively into the
       shifted set,

where "inner" means inside the overlap of the two windows pulled in by the
policy margin.  Multiplicity-m points occupy m match slots.  As the window
grows this converges to the infinite-set value; the margin must dominate
every eps that is probed, otherwise a partner could hide outside the sample
and the answer would be dishonest (``MarginTooSmall``).

In 1-d an order-preserving matching of the sorted sequences is bottleneck
optimal and eps* is found exactly (it is an attained pairwise distance).
In higher dimensions eps* is located by binary search on the sorted list of
candidate pairwise distances <= margin with a maximum-matching feasibility
test (Hopcroft-Karp) on the <= eps graph.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from . import kernels, kronecker, measures
from .core_model import Ball, PointMultiSet, SignedSetUnsupported, as_point


class MarginTooSmall(ValueError):
    """The probed eps (or the shift) does not fit inside the policy margin."""


@dataclass(frozen=True)
class MatchPolicy:
    """Boundary policy for windowed matching queries.

    ``margin`` bounds every eps that may be probed; ``expansion`` records
    that multiplicity-m points are expanded to m match slots (always on; the
    flag is echoed in reports).
    """

    margin: float = 1.0
    expansion: bool = True

    def __post_init__(self):
        if not self.margin >= 0:
            raise ValueError("margin must be >= 0")


@dataclass(eq=False)
class MatchReport:
    """Result of one bottleneck query: eps*, pairs, and the policy echo."""

    tau: np.ndarray
    eps_star: float
    pairs_shifted_to_base: tuple[np.ndarray, np.ndarray]
    pairs_base_to_shifted: tuple[np.ndarray, np.ndarray]
    inner_counts: tuple[int, int]
    policy: MatchPolicy

    @property
    def max_pair_distance(self) -> float:
        worst = 0.0
        for left, right in (self.pairs_shifted_to_base, self.pairs_base_to_shifted):
            if len(left):
                worst = max(worst, float(np.linalg.norm(
                    np.atleast_2d(left) - np.atleast_2d(right), axis=1).max()))
        return worst


def _expanded(A: PointMultiSet) -> np.ndarray:
    if A.signed:
        raise SignedSetUnsupported(
            "the geometric criterion is stated for positive multiple sets; "
            "split the signs first")
    return A.expanded_positions()


def _sides(A: PointMultiSet, tau: np.ndarray, policy: MatchPolicy):
    """Inner left sets and full partner sets for the two one-sided tests."""
    base = _expanded(A)
    shifted = base + tau
    overlap = A.window.intersect(A.window.translate(tau))
    if overlap is None:
        raise MarginTooSmall("the shift leaves no window overlap")
    inner = overlap.shrink(policy.margin)
    if inner is None:
        raise MarginTooSmall("margin swallows the window overlap")
    left_i = shifted[inner.contains_points(shifted)]
    left_ii = base[inner.contains_points(base)]
    return base, shifted, left_i, left_ii


def _one_sided_eps(left: np.ndarray, right: np.ndarray, cap: float, dim: int):
    """(eps, matched left, matched right) for one side; eps = inf when > cap."""
    if len(left) == 0:
        return 0.0, left, left
    if dim == 1:
        l = np.sort(left[:, 0])
        r = np.sort(right[:, 0])
        eps = kernels.bottleneck_1d(l, r, cap)
        if not np.isfinite(eps):
            return np.inf, None, None
        match = kernels.greedy_matching_1d(l, r, eps)
        return float(eps), l.reshape(-1, 1), r[match].reshape(-1, 1)
    return _bottleneck_nd(left, right, cap)


def bottleneck_eps(A: PointMultiSet, tau, policy: MatchPolicy) -> MatchReport:
    """Exact windowed bottleneck value eps*(tau) with the realizing matching."""
    tau = as_point(tau, A.dim)
    base, shifted, left_i, left_ii = _sides(A, tau, policy)
    eps_i, li, ri = _one_sided_eps(left_i, base, policy.margin, A.dim)
    eps_ii, lii, rii = _one_sided_eps(left_ii, shifted, policy.margin, A.dim)
    if not (np.isfinite(eps_i) and np.isfinite(eps_ii)):
        raise MarginTooSmall(
            f"eps*({tau.tolist()}) exceeds the policy margin {policy.margin}")
    return MatchReport(
        tau=tau,
        eps_star=max(eps_i, eps_ii),
        pairs_shifted_to_base=(li, ri),
        pairs_base_to_shifted=(lii, rii),
        inner_counts=(len(left_i), len(left_ii)),
        policy=policy,
    )


def is_eps_period(A: PointMultiSet, tau, eps: float, policy: MatchPolicy) -> bool:
    """True when eps*(tau) < eps; probes only the requested eps."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    if eps > policy.margin:
        raise MarginTooSmall("requested eps exceeds the policy margin")
    tau = as_point(tau, A.dim)
    base, shifted, left_i, left_ii = _sides(A, tau, policy)
    if A.dim == 1:
        b = np.sort(base[:, 0])
        s = np.sort(shifted[:, 0])
        return (kernels.feasible_1d(np.sort(left_i[:, 0]), b, eps, True)
                and kernels.feasible_1d(np.sort(left_ii[:, 0]), s, eps, True))
    return (_feasible_nd(left_i, base, eps, strict=True)
            and _feasible_nd(left_ii, shifted, eps, strict=True))


def scan_periods(A: PointMultiSet, eps: float, candidates, policy: MatchPolicy):
    """Filter candidate shifts by is_eps_period; report the observed gap.

    Returns (accepted, gap) where the gap is taken over the accepted shifts
    (their first coordinate in 1-d, their norms otherwise) inside the span
    of the candidate list -- the empirical covering-radius surrogate.
    """
    cands = [as_point(t, A.dim) for t in candidates]
    half = A.window.sides.min() / 2 - policy.margin
    for t in cands:
        if np.abs(t).max() > half:
            raise ValueError(
                f"candidate shift {t.tolist()} exceeds window/2 - margin = {half}")
    accepted = [t for t in cands if is_eps_period(A, t, eps, policy)]
    if A.dim == 1:
        keys = [float(t[0]) for t in accepted]
        span = ([float(t[0]) for t in cands] or [0.0])
    else:
        keys = [float(np.linalg.norm(t)) for t in accepted]
        span = ([float(np.linalg.norm(t)) for t in cands] or [0.0])
    gap = kronecker.max_gap(keys, (min(span), max(span)))
    return accepted, gap


def density(A: PointMultiSet, centers, radii):
    """Counting densities card(A in B(c, R)) / (omega_d R^d) per center and radius.

    The estimate is the mean over centers at the largest radius.  Signed
    samples contribute their signed count (see measures.signed_density for
    the explicitly signed surface).
    """
    return measures.ball_density_table(A, centers, radii)


def card_bound(A: PointMultiSet, centers=None) -> int:
    """Uniform unit-ball mass bound M: max_c sum |m| over B(c, 1).

    With explicit centers the maximum is over those centers.  Without, in
    1-d, the exact supremum over all real centers is computed by a sliding
    scan: a set of points fits in an open interval of length 2 exactly when
    its span is < 2.
    """
    if centers is not None:
        best = 0
        for c in centers:
            best = max(best, measures.variation_in_ball(A, c, 1.0))
        return int(best)
    if A.dim != 1:
        raise ValueError("the exact center sweep is 1-d; pass explicit centers")
    pos = np.sort(np.repeat(A.positions_1d(), np.abs(A.multiplicities)))
    if pos.size == 0:
        return 0
    best, j = 0, 0
    for i in range(pos.size):
        while pos[i] - pos[j] >= 2.0:
            j += 1
        best = max(best, i - j + 1)
    return int(best)


# -- general-d bottleneck machinery ------------------------------------------

def _adjacency(left: np.ndarray, right: np.ndarray, eps: float, strict: bool):
    """Sorted sparse adjacency lists of the <= eps (or < eps) distance graph."""
    from scipy.spatial import cKDTree

    tree = cKDTree(right)
    # query with an ulp of slack, then decide by the exact predicate
    rough = tree.query_ball_point(left, eps * (1.0 + 1e-12) + 1e-300)
    adj = []
    for i, js in enumerate(rough):
        row = []
        for j in sorted(js):
            d = float(np.linalg.norm(left[i] - right[j]))
            if (d < eps) if strict else (d <= eps):
                row.append(j)
        adj.append(row)
    return adj


def _hopcroft_karp(adj, n_right: int) -> int:
    """Maximum matching size on a bipartite graph given as left adjacency lists."""
    INF = -1
    match_l = [-1] * len(adj)
    match_r = [-1] * n_right
    size = 0
    while True:
        dist = [INF] * len(adj)
        queue = deque()
        for u, m in enumerate(match_l):
            if m == -1:
                dist[u] = 0
                queue.append(u)
        found_free = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found_free = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if not found_free:
            return size

        def dfs(u):
            for v in adj[u]:
                w = match_r[v]
                if w == -1 or (dist[w] == dist[u] + 1 and dfs(w)):
                    match_l[u] = v
                    match_r[v] = u
                    return True
            dist[u] = INF
            return False

        for u in range(len(adj)):
            if match_l[u] == -1 and dfs(u):
                size += 1


def _feasible_nd(left, right, eps, strict=False) -> bool:
    if len(left) == 0:
        return True
    if len(left) > len(right):
        return False
    adj = _adjacency(left, right, eps, strict)
    if any(not row for row in adj):
        return False
    return _hopcroft_karp(adj, len(right)) == len(left)


def _bottleneck_nd(left: np.ndarray, right: np.ndarray, cap: float):
    """Exact bottleneck over the finite candidate list of pairwise distances <= cap."""
    from scipy.spatial import cKDTree

    if len(left) == 0:
        return 0.0, left, left
    if len(left) > len(right):
        return np.inf, None, None
    tree = cKDTree(right)
    neighbor_sets = tree.query_ball_point(left, cap * (1.0 + 1e-12) + 1e-300)
    dists = []
    for i, js in enumerate(neighbor_sets):
        close = [float(np.linalg.norm(left[i] - right[j])) for j in js]
        close = [d for d in close if d <= cap]
        if not close:
            return np.inf, None, None
        dists.extend(close)
    candidates = np.unique(np.asarray(dists))
    lo, hi = 0, candidates.size - 1
    if not _feasible_nd(left, right, float(candidates[hi])):
        return np.inf, None, None
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible_nd(left, right, float(candidates[mid])):
            hi = mid
        else:
            lo = mid + 1
    eps = float(candidates[lo])
    pairs = _lexicographic_matching(left, right, eps)
    return eps, left, right[pairs]


def _lexicographic_matching(left, right, eps) -> list[int]:
    """Lexicographically smallest right-index assignment among matchings at eps."""
    adj = _adjacency(left, right, eps, strict=False)
    chosen: list[int] = []
    taken: set[int] = set()
    m = len(left)
    for i in range(m):
        found = False
        for j in adj[i]:
            if j in taken:
                continue
            rest = [[v for v in adj[u] if v != j and v not in taken]
                    for u in range(i + 1, m)]
            if any(not row for row in rest):
                continue
            if _hopcroft_karp(rest, len(right)) == len(rest):
                chosen.append(j)
                taken.add(j)
                found = True
                break
        if not found:  # pragma: no cover - eps is feasible by construction
            raise AssertionError("no consistent assignment at the optimal eps")
    return chosen
