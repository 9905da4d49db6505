"""Associate measures: mollifier convolutions, variation, signed density.

A sample A with masses m(a) induces the measure sum m(a) * delta_a.  The
weak almost-periodicity test smooths it against the standard bump

    phi(x) = exp(1 - 1/(1 - (x/s)^2))   for |x| < s, else 0

(radial in d > 1) and takes grid suprema of |g(x+tau) - g(x)| for the
smoothed g = phi * mu.  The bump is even, which reconciles the two
orientations phi(x + t) and phi(x - a) of the convolution: they agree for
even test functions, so g(x) = sum m(a) phi(x - a) serves both.

The derivative supremum M = sup |phi'| enters the quantitative bounds of
the dyadic counterexamples (shift suprema below 4M/level).  It is found by
dense maximization of the closed-form derivative on the unit profile plus a
bounded local refinement, cached, and rescaled as M(s) = M(1)/s.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .ap_functions import Grid1D
from .core_model import Ball, Box, PointMultiSet, RegionExceedsWindow, as_point, card_in

import warnings


def unit_ball_volume(dim: int) -> float:
    """Volume of the unit ball in R^d: pi^(d/2) / Gamma(d/2 + 1)."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    return math.pi ** (dim / 2) / math.gamma(dim / 2 + 1)


def _unit_profile(u: np.ndarray) -> np.ndarray:
    t = 1.0 - u * u
    out = np.zeros_like(u)
    pos = t > 0.0
    out[pos] = np.exp(1.0 - 1.0 / t[pos])
    return out


def _unit_profile_derivative(u: np.ndarray) -> np.ndarray:
    # d/du exp(1 - 1/(1-u^2)) = -phi(u) * 2u / (1-u^2)^2 on |u| < 1
    t = 1.0 - u * u
    out = np.zeros_like(u)
    pos = t > 0.0
    out[pos] = -np.exp(1.0 - 1.0 / t[pos]) * 2.0 * u[pos] / (t[pos] * t[pos])
    return out


@functools.lru_cache(maxsize=8)
def _unit_deriv_sup(grid_step: float) -> float:
    """max |phi'| on the unit profile: dense grid then bounded refinement."""
    from scipy.optimize import minimize_scalar

    u = np.arange(grid_step, 1.0, grid_step)
    vals = np.abs(_unit_profile_derivative(u))
    i = int(np.argmax(vals))
    lo = max(u[i] - 2 * grid_step, 0.0)
    hi = min(u[i] + 2 * grid_step, 1.0 - 1e-15)
    res = minimize_scalar(
        lambda x: -abs(float(_unit_profile_derivative(np.array([x]))[0])),
        bounds=(lo, hi), method="bounded", options={"xatol": 1e-14})
    return max(float(vals[i]), -float(res.fun))


@dataclass(eq=False)
class Mollifier:
    """Smooth bump supported on (-scale, scale); radial for d > 1.

    0 <= phi <= 1, phi(0) = 1.  ``deriv_sup`` is the cached numeric maximum
    of |phi'| together with the grid step used to locate it.
    """

    scale: float = 0.5
    deriv_grid_step: float = 1e-6

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def value(self, x) -> np.ndarray:
        """phi at scalar offsets (1-d signature; use value_at for points)."""
        u = np.asarray(x, dtype=float) / self.scale
        return _unit_profile(np.atleast_1d(u))

    def value_at(self, offsets: np.ndarray) -> np.ndarray:
        """phi(|x - a|) for an (m, d) array of offsets."""
        offsets = np.atleast_2d(offsets)
        r = np.linalg.norm(offsets, axis=1)
        return self.value(r)

    def derivative(self, x) -> np.ndarray:
        u = np.asarray(x, dtype=float) / self.scale
        return _unit_profile_derivative(np.atleast_1d(u)) / self.scale

    @property
    def deriv_sup(self) -> float:
        """M = sup |phi'|; scales as M(1)/scale by the chain rule."""
        return _unit_deriv_sup(self.deriv_grid_step) / self.scale


def mollifier_deriv_sup(phi: Mollifier) -> float:
    """Deterministic numeric maximum of |phi'|."""
    return phi.deriv_sup


def convolve(A: PointMultiSet, phi: Mollifier, x) -> float:
    """g(x) = sum m(a) * phi(x - a).

    Warns ``RegionExceedsWindow`` when B(x, scale) is not inside the window
    (points feeding the value could be missing from the sample).
    """
    x = as_point(x, A.dim)
    if not A.window.contains_ball(Ball(x, phi.scale)):
        warnings.warn("convolution support exceeds the sampled window",
                      RegionExceedsWindow, stacklevel=2)
    if A.n_points == 0:
        return 0.0
    vals = phi.value_at(A.positions - x)
    return float((A.multiplicities * vals).sum())


@dataclass(eq=False)
class ConvolutionTrace:
    """g = phi * mu sampled on a uniform 1-d grid."""

    nodes: np.ndarray
    values: np.ndarray
    scale: float


def convolution_trace(A: PointMultiSet, phi: Mollifier, grid: Grid1D) -> ConvolutionTrace:
    """Evaluate g on a 1-d grid through the bump-train kernel."""
    if A.dim != 1:
        raise ValueError("traces are 1-d; use convolve pointwise in d > 1")
    nodes = grid.nodes_1d()
    _check_convolution_region(A, nodes[0], nodes[-1], phi.scale)
    values = kernels.bump_train(float(nodes[0]), grid.step, nodes.size,
                                A.positions_1d(), A.multiplicities.astype(float),
                                phi.scale)
    return ConvolutionTrace(nodes=nodes, values=values, scale=phi.scale)


def _check_convolution_region(A: PointMultiSet, lo: float, hi: float, scale: float):
    if lo - scale < A.window.lower[0] or hi + scale > A.window.upper[0]:
        raise ValueError("grid (plus mollifier support) leaves the sampled window")


def weak_ap_sup_diff(A: PointMultiSet, phi: Mollifier, tau, grid) -> float:
    """max over grid nodes of |g(x + tau) - g(x)| for g = phi * mu_A."""
    tau = as_point(tau, A.dim)
    if A.dim == 1:
        nodes = grid.nodes_1d()
        t = float(tau[0])
        lo = min(nodes[0], nodes[0] + t)
        hi = max(nodes[-1], nodes[-1] + t)
        _check_convolution_region(A, lo, hi, phi.scale)
        pos = A.positions_1d()
        masses = A.multiplicities.astype(float)
        g0 = kernels.bump_train(float(nodes[0]), grid.step, nodes.size, pos, masses, phi.scale)
        if t == 0.0:
            return 0.0
        g1 = kernels.bump_train(float(nodes[0] + t), grid.step, nodes.size, pos, masses, phi.scale)
        return float(np.abs(g1 - g0).max())
    nodes = grid.nodes()
    vals = np.empty(nodes.shape[0])
    for i, x in enumerate(nodes):
        vals[i] = convolve(A, phi, x + tau) - convolve(A, phi, x)
    return float(np.abs(vals).max())


def variation_in_ball(A: PointMultiSet, center, radius: float = 1.0) -> int:
    """Total variation mass sum |m(a)| over the open ball."""
    ball = Ball(as_point(center, A.dim), radius)
    if not A.window.contains_ball(ball):
        warnings.warn("ball exceeds the sampled window; variation may be partial",
                      RegionExceedsWindow, stacklevel=2)
    if A.n_points == 0:
        return 0
    mask = ball.contains_points(A.positions)
    return int(np.abs(A.multiplicities[mask]).sum())


@dataclass(eq=False)
class DensityReport:
    """Per-(center, radius) counting densities and the final estimate."""

    rows: list  # (center tuple, radius, count, count / (omega_d R^d))
    estimate: float


def ball_density_table(A: PointMultiSet, centers, radii) -> DensityReport:
    """Signed counting density table; estimate = mean over centers at max R."""
    radii = sorted(float(r) for r in radii)
    if not radii:
        raise ValueError("need at least one radius")
    omega = unit_ball_volume(A.dim)
    rows = []
    largest = []
    for c in centers:
        c = as_point(c, A.dim)
        for r in radii:
            ball = Ball(c, r)
            if not A.window.contains_ball(ball):
                raise ValueError(f"ball B({c.tolist()}, {r}) exceeds the window")
            count = card_in(A, ball)
            value = count / (omega * r ** A.dim)
            rows.append((tuple(c.tolist()), r, count, value))
            if r == radii[-1]:
                largest.append(value)
    if not largest:
        raise ValueError("need at least one center")
    return DensityReport(rows=rows, estimate=float(np.mean(largest)))


def signed_density(A: PointMultiSet, centers, radii) -> DensityReport:
    """Signed analog of the counting density (masses keep their signs)."""
    return ball_density_table(A, centers, radii)
