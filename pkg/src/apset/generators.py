"""Point-set constructions: perturbed lattices and Delone diagnostics.

``perturbed_lattice`` builds the finite sample {k*G + F(k)} for integer
vectors k, where G is a non-degenerate lattice matrix (row-vector
convention) and the perturbation components F_j are real-valued exponential
polynomials evaluated at the integer vector k.

Window honesty.  The sets are infinite but the sample is not, so the
declared box must not pretend to contain points it cannot know about.  The
construction 1) takes the bounding box of the requested lattice image,
padded by a small fraction of the lattice cell, 2) enlarges the index box to
cover every integer vector whose point could possibly fall inside that
window (using the certified l1 bound on |F|), and 3) keeps exactly the
generated points inside the window.  Any ball inside the declared window
then contains precisely the points the infinite set would put there.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ap_functions import ExpPolynomial
from .core_model import Box, PointMultiSet
from . import kronecker

_DET_TOL = 1e-9
_PAD_FRACTION = 0.1

_COVER_STEP = {1: 1e-2, 2: 5e-2, 3: 1e-1}


@dataclass(eq=False)
class LatticeMatrix:
    """Non-degenerate d x d matrix G; the lattice is {k G : k integer}."""

    matrix: np.ndarray

    def __init__(self, matrix):
        m = np.atleast_2d(np.asarray(matrix, dtype=float))
        if m.shape[0] != m.shape[1]:
            raise ValueError("lattice matrix must be square")
        if abs(np.linalg.det(m)) <= _DET_TOL:
            raise ValueError("lattice matrix is degenerate")
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    @property
    def min_cell(self) -> float:
        """Smallest singular value: a lower bound on lattice displacement per index step."""
        return float(np.linalg.svd(self.matrix, compute_uv=False).min())

    def map_indices(self, k: np.ndarray) -> np.ndarray:
        return np.asarray(k, dtype=float) @ self.matrix

    @classmethod
    def identity(cls, dim: int) -> "LatticeMatrix":
        return cls(np.eye(dim))


@dataclass(eq=False)
class IndexBox:
    """Inclusive integer box in Z^d."""

    lower: np.ndarray
    upper: np.ndarray

    def __init__(self, lower, upper):
        lo = np.atleast_1d(np.asarray(lower, dtype=np.int64))
        hi = np.atleast_1d(np.asarray(upper, dtype=np.int64))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("index box corners must be integer vectors of equal length")
        if not (lo <= hi).all():
            raise ValueError("index box is empty")
        self.lower = lo
        self.upper = hi

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def count(self) -> int:
        return int(np.prod(self.upper - self.lower + 1))

    def indices(self) -> np.ndarray:
        axes = [np.arange(l, u + 1, dtype=np.int64) for l, u in zip(self.lower, self.upper)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    @classmethod
    def centered(cls, half_width: int, dim: int = 1) -> "IndexBox":
        return cls([-half_width] * dim, [half_width] * dim)


def _evaluate_components(F: list[ExpPolynomial], k: np.ndarray) -> np.ndarray:
    cols = [np.asarray(P.evaluate(k.astype(float)), dtype=float) for P in F]
    return np.stack(cols, axis=1)


def perturbed_lattice(gamma: LatticeMatrix, F: list[ExpPolynomial], K: IndexBox,
                      certify_eps: float | None = None,
                      certify_bound: int | None = None) -> PointMultiSet:
    """Sample {k G + F(k)} on an honestly saturated window.

    With ``certify_eps`` the metadata carries the integer vectors r whose
    certified shift bound is below eps for every component, together with
    the lattice shifts r G they induce (each r G is then a d*eps-almost
    period of the set, witnessed by the index shift k -> k + r).
    """
    d = gamma.dim
    if K.dim != d or len(F) != d:
        raise ValueError("lattice, index box, and perturbation dimensions must agree")
    for P in F:
        if P.dim != d:
            raise ValueError("perturbation components must have the lattice dimension")
        if not P.real_valued:
            raise ValueError("perturbation components must be real valued")
    if K.count > 4_000_000:
        raise ValueError("index box too large for desk-scale generation")

    sup_f = np.array([P.coefficient_mass() for P in F])
    pad = _PAD_FRACTION * gamma.min_cell

    lat = gamma.map_indices(K.indices())
    pts = lat + _evaluate_components(F, K.indices()) if any(P.n_terms for P in F) else lat
    window = Box(pts.min(axis=0) - pad, pts.max(axis=0) + pad)

    # cover every index whose point could land inside the window
    expanded_lo = window.lower - sup_f
    expanded_hi = window.upper + sup_f
    corners = np.array(np.meshgrid(*zip(expanded_lo, expanded_hi), indexing="ij"))
    corners = corners.reshape(d, -1).T
    pre = corners @ np.linalg.inv(gamma.matrix)
    K_gen = IndexBox(np.floor(pre.min(axis=0)), np.ceil(pre.max(axis=0)))

    idx = K_gen.indices()
    pts = gamma.map_indices(idx)
    if any(P.n_terms for P in F):
        pts = pts + _evaluate_components(F, idx)
    keep = window.contains_points(pts)
    pts = pts[keep]

    meta = {
        "lattice": gamma.matrix.tolist(),
        "perturbation_l1": sup_f.tolist(),
        "index_box": (K.lower.tolist(), K.upper.tolist()),
        "window_pad": pad,
    }
    if certify_eps is not None:
        bound = certify_bound if certify_bound is not None else 1000
        periods = kronecker.common_integer_almost_periods(F, certify_eps, bound)
        meta["certify_eps"] = float(certify_eps)
        meta["certified_integer_vectors"] = [r.tolist() for r in periods]
        meta["certified_shifts"] = [gamma.map_indices(r.reshape(1, -1))[0].tolist()
                                    for r in periods]
    return PointMultiSet(pts, np.ones(len(pts), dtype=np.int64), window, signed=False, meta=meta)


def sine_example(dim: int, K: IndexBox) -> PointMultiSet:
    """The period-free construction k + (1/5)(sin k_1, ..., sin k_d)."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    F = [ExpPolynomial.sine(amplitude=0.2, frequency=1.0, axis=j, dim=dim)
         for j in range(dim)]
    return perturbed_lattice(LatticeMatrix.identity(dim), F, K)


def min_separation(A: PointMultiSet) -> float:
    """Minimum pairwise distance between (distinct) points of the sample."""
    if A.n_points < 2:
        raise ValueError("need at least two points")
    if A.dim == 1:
        return float(np.diff(np.sort(A.positions_1d())).min())
    from scipy.spatial import cKDTree

    tree = cKDTree(A.positions)
    dist, _ = tree.query(A.positions, k=2)
    return float(dist[:, 1].min())


def covering_radius_window(A: PointMultiSet, step: float | None = None,
                           margin: float = 0.0) -> float:
    """Largest grid-sampled distance from the (shrunk) window to the set.

    A small value together with a positive ``min_separation`` is the Delone
    diagnostic: the sample is relatively dense and uniformly discrete in its
    window.
    """
    if A.n_points == 0:
        raise ValueError("empty set has no covering radius")
    box = A.window if margin == 0 else A.window.shrink(margin)
    if box is None:
        raise ValueError("margin swallows the window")
    if step is None:
        step = _COVER_STEP.get(A.dim, 0.2)
    if A.dim == 1:
        nodes = np.arange(box.lower[0], box.upper[0] + step / 2, step)
        pos = np.sort(A.positions_1d())
        j = np.clip(np.searchsorted(pos, nodes), 1, pos.size - 1)
        dist = np.minimum(np.abs(nodes - pos[j - 1]), np.abs(nodes - pos[j]))
        return float(dist.max())
    from scipy.spatial import cKDTree

    from .ap_functions import GridND

    nodes = GridND(box, step).nodes()
    tree = cKDTree(A.positions)
    dist, _ = tree.query(nodes)
    return float(dist.max())
