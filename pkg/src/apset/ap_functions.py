"""Exponential polynomials and certified shift-difference bounds.

An exponential polynomial is a finite sum  sum_m c_m * exp(i <x, f_m>)  with
real frequency vectors f_m and complex coefficients c_m.  Two quantities
drive the almost-period machinery:

* ``shift_bound`` -- a certified majorant of sup_x |P(x+tau) - P(x)|,
  namely sum_m |c_m| * |exp(i<tau, f_m>) - 1|.  The returned value is nudged
  one part in 1e13 upward so that it stays an upper bound for *evaluated*
  differences even in the face of round-off.  Certification of almost
  periods always goes through this bound, never through grids.

* ``grid_sup_diff`` -- a grid maximum of |f(x+tau) - f(x)|, which is a lower
  bound for the true sup.  For exponential polynomials the difference is
  evaluated through the analytically cancelled polynomial with coefficients
  c_m * (exp(i<tau, f_m>) - 1), so near-periods do not drown in subtraction
  noise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_model import Box, as_point

REAL_VALUED_TOL = 1e-12

# upward relative nudge applied to the certified majorant: keeps
# grid_sup_diff(P, tau, G) <= shift_bound(P, tau) exact in floating point
_CERTIFY_NUDGE = 1.0 + 1e-13

# sup-estimation grid defaults (per axis)
DEFAULT_GRID_STEP = {1: 1e-3, 2: 1e-2}


@dataclass(frozen=True)
class AlmostPeriodQuery:
    """A shift tau paired with the tolerance eps it is tested against."""

    tau: tuple
    eps: float

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")


class ExpPolynomial:
    """P(x) = sum_m coeffs[m] * exp(i <x, freqs[m]>).

    Equal frequency rows are merged at construction and exactly-zero
    coefficients dropped.  ``real_valued`` is true when the terms are closed
    under (f -> -f, c -> conj(c)); perturbation components fed to the
    generators must be real valued.
    """

    def __init__(self, freqs, coeffs, dim: int | None = None):
        freqs = np.asarray(freqs, dtype=float)
        coeffs = np.asarray(coeffs, dtype=complex)
        if freqs.ndim == 1:
            freqs = freqs.reshape(-1, 1)
        if freqs.size == 0:
            freqs = freqs.reshape(0, dim if dim else 1)
        if freqs.ndim != 2 or coeffs.shape != (freqs.shape[0],):
            raise ValueError("need one coefficient per frequency vector")
        if not np.isfinite(freqs).all():
            raise ValueError("frequencies must be finite")
        if dim is not None and freqs.shape[1] != dim:
            raise ValueError(f"expected dimension {dim}")

        freqs, coeffs = self._merge(freqs, coeffs)
        self.freqs = freqs
        self.coeffs = coeffs
        self.dim = freqs.shape[1]
        self.real_valued = self._check_real()

    @staticmethod
    def _merge(freqs, coeffs):
        if freqs.shape[0] == 0:
            return freqs, coeffs
        order = np.lexsort(freqs.T[::-1])
        freqs, coeffs = freqs[order], coeffs[order]
        if freqs.shape[0] > 1:
            same = (np.diff(freqs, axis=0) == 0).all(axis=1)
            group = np.concatenate([[0], np.cumsum(~same)])
        else:
            group = np.zeros(1, dtype=np.int64)
        starts = np.flatnonzero(np.concatenate([[True], np.diff(group) > 0]))
        summed = np.add.reduceat(coeffs, starts)
        keep = summed != 0
        return freqs[starts[keep]], summed[keep]

    def _check_real(self) -> bool:
        if self.n_terms == 0:
            return True
        scale = np.abs(self.coeffs).max()
        # look up the conjugate partner of every term
        key = {tuple(f): c for f, c in zip(self.freqs, self.coeffs)}
        for f, c in zip(self.freqs, self.coeffs):
            partner = key.get(tuple(-f))
            if partner is None or abs(partner - np.conj(c)) > REAL_VALUED_TOL * scale:
                return False
        return True

    @property
    def n_terms(self) -> int:
        return self.coeffs.size

    @classmethod
    def constant(cls, value, dim: int = 1) -> "ExpPolynomial":
        return cls(np.zeros((1, dim)), [complex(value)], dim=dim)

    @classmethod
    def sine(cls, amplitude: float = 1.0, frequency: float = 1.0,
             axis: int = 0, dim: int = 1) -> "ExpPolynomial":
        """amplitude * sin(frequency * x[axis]) as a real-valued polynomial."""
        f = np.zeros((2, dim))
        f[0, axis] = frequency
        f[1, axis] = -frequency
        c = [amplitude / 2j, -amplitude / 2j]
        return cls(f, c, dim=dim)

    @classmethod
    def cosine(cls, amplitude: float = 1.0, frequency: float = 1.0,
               axis: int = 0, dim: int = 1) -> "ExpPolynomial":
        f = np.zeros((2, dim))
        f[0, axis] = frequency
        f[1, axis] = -frequency
        c = [amplitude / 2, amplitude / 2]
        return cls(f, c, dim=dim)

    def coefficient_mass(self) -> float:
        """l1 mass sum |c_m|; a certified bound for sup |P|."""
        return float(np.abs(self.coeffs).sum())

    def evaluate(self, x):
        """Evaluate at a point or an (m, d) batch; real array when real_valued."""
        x = np.asarray(x, dtype=float)
        single = x.ndim <= 1 and self.dim == 1 and x.ndim == 0
        if x.ndim == 0:
            x = x.reshape(1, 1)
        elif x.ndim == 1:
            if self.dim == 1 and x.size != 1:
                x = x.reshape(-1, 1)  # batch of scalars
                single = False
            else:
                x = x.reshape(1, -1)
                single = True
        if x.shape[1] != self.dim:
            raise ValueError("evaluation point dimension mismatch")
        if self.n_terms == 0:
            vals = np.zeros(x.shape[0], dtype=complex)
        else:
            phases = x @ self.freqs.T
            vals = np.exp(1j * phases) @ self.coeffs
        if self.real_valued:
            vals = vals.real
        return vals[0] if single else vals

    def shifted_difference(self, tau) -> "ExpPolynomial":
        """The polynomial x -> P(x + tau) - P(x) (coefficients c*(e^{i<tau,f>}-1))."""
        tau = as_point(tau, self.dim)
        factors = np.exp(1j * (self.freqs @ tau)) - 1.0
        return ExpPolynomial(self.freqs, self.coeffs * factors, dim=self.dim)

    def __repr__(self):
        return f"ExpPolynomial({self.n_terms} terms, dim={self.dim}, real_valued={self.real_valued})"


def shift_bound(P: ExpPolynomial, tau) -> float:
    """Certified majorant of sup_x |P(x+tau) - P(x)|.

    Triangle inequality over terms: sum |c_m| * |exp(i theta_m) - 1| with
    theta_m = <tau, f_m>, the modulus computed as 2|sin(theta/2)|.  Even in
    tau exactly (the phases of -tau are exact negations).
    """
    tau = as_point(tau, P.dim)
    if P.n_terms == 0:
        return 0.0
    theta = P.freqs @ tau
    factors = 2.0 * np.abs(np.sin(0.5 * theta))
    return float((np.abs(P.coeffs) * factors).sum()) * _CERTIFY_NUDGE


@dataclass(eq=False)
class Grid1D:
    """Uniform sampling grid on a 1-d box (both endpoints included)."""

    box: Box
    step: float

    def __init__(self, box: Box, step: float):
        if box.dim != 1:
            raise ValueError("Grid1D needs a 1-d box")
        if not step > 0:
            raise ValueError("step must be positive")
        self.box = box
        self.step = float(step)

    @property
    def n_nodes(self) -> int:
        return int(np.floor((self.box.upper[0] - self.box.lower[0]) / self.step + 1e-9)) + 1

    def nodes_1d(self) -> np.ndarray:
        return self.box.lower[0] + self.step * np.arange(self.n_nodes)

    def nodes(self) -> np.ndarray:
        return self.nodes_1d().reshape(-1, 1)


@dataclass(eq=False)
class GridND:
    """Tensor sampling grid on a d-dimensional box."""

    box: Box
    step: np.ndarray

    def __init__(self, box: Box, step):
        step = np.broadcast_to(np.asarray(step, dtype=float), (box.dim,)).copy()
        if not (step > 0).all():
            raise ValueError("steps must be positive")
        self.box = box
        self.step = step
        counts = np.floor(box.sides / step + 1e-9).astype(int) + 1
        if counts.prod() > 4e7:
            raise ValueError("grid too large; increase the step")
        self._counts = counts

    def nodes(self) -> np.ndarray:
        axes = [self.box.lower[i] + self.step[i] * np.arange(self._counts[i])
                for i in range(self.box.dim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)


def default_grid(box: Box):
    step = DEFAULT_GRID_STEP.get(box.dim, 1e-1)
    return Grid1D(box, step) if box.dim == 1 else GridND(box, step)


def grid_sup_diff(f, tau, grid) -> float:
    """max over grid nodes of |f(x+tau) - f(x)|; a lower bound for the sup.

    ``f`` is an ExpPolynomial (evaluated through the cancelled difference
    polynomial) or any callable accepting an (m, d) batch.
    """
    nodes = grid.nodes()
    if isinstance(f, ExpPolynomial):
        tau = as_point(tau, f.dim)
        diff = f.shifted_difference(tau)
        if diff.n_terms == 0:
            return 0.0
        return float(np.abs(diff.evaluate(nodes)).max())
    tau = as_point(tau, nodes.shape[1])
    vals = np.abs(np.asarray(f(nodes + tau)) - np.asarray(f(nodes)))
    return float(vals.max())
