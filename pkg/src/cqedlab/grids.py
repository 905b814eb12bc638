"""Uniform 1D grids, discrete site bases, product grids, and the shared
finite-difference / quadrature toolbox used by every solver.

Conventions: second-order central differences; trapezoidal quadrature;
hard-wall grids carry their endpoints but pin amplitudes there to zero;
decay-box grids treat the first ghost point outside the box as zero, so both
kinds reduce to a Dirichlet Laplacian diagonalized by the type-I DST.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.fft import dst

HARD_WALL = "hard-wall"
DECAY_BOX = "decay-box"


class GridError(ValueError):
    """Invalid grid construction or mismatched field length."""


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [min, max] with n points and exact spacing."""

    min: float
    max: float
    n: int
    boundary: str = DECAY_BOX

    def __post_init__(self):
        if self.max <= self.min:
            raise GridError(f"invalid-bounds: max={self.max} <= min={self.min}")
        if self.n < 3:
            raise GridError(f"too-few-points: n={self.n} < 3")
        if self.boundary not in (HARD_WALL, DECAY_BOX):
            raise GridError(f"unknown boundary kind {self.boundary!r}")

    @property
    def dx(self) -> float:
        return (self.max - self.min) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return self.min + self.dx * np.arange(self.n)

    @property
    def weights(self) -> np.ndarray:
        """Trapezoidal quadrature weights."""
        w = np.full(self.n, self.dx)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    @property
    def interior(self) -> slice:
        """Slice of points whose amplitude is free to evolve."""
        return slice(1, -1) if self.boundary == HARD_WALL else slice(None)

    @property
    def n_active(self) -> int:
        return self.n - 2 if self.boundary == HARD_WALL else self.n

    def coordinate(self, i: int) -> float:
        return self.min + i * self.dx


@dataclass(frozen=True)
class SiteBasis:
    """Discrete orthonormal basis (e.g. lattice sites); quadrature weight 1."""

    labels: tuple
    dipoles: tuple  # dipole value carried by each basis state

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def points(self) -> np.ndarray:
        return np.asarray(self.dipoles, dtype=float)

    @property
    def weights(self) -> np.ndarray:
        return np.ones(self.n)

    @property
    def interior(self) -> slice:
        return slice(None)

    @property
    def n_active(self) -> int:
        return self.n


@dataclass(frozen=True)
class ProductGrid:
    """Ordered tensor product of Grid1D / SiteBasis axes.

    Axis order is fixed per state type: helium-grid (x1, x2, p); two-site
    (configuration, p); dressed orbital (x, q) or (site, q); dressed-pair
    (x1, q1, x2, q2).
    """

    axes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))

    @property
    def shape(self) -> tuple:
        return tuple(ax.n for ax in self.axes)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def axis_weights(self, i: int) -> np.ndarray:
        return self.axes[i].weights

    def weight_array(self) -> np.ndarray:
        """Full tensor of quadrature weights (small grids only)."""
        w = self.axes[0].weights
        for ax in self.axes[1:]:
            w = np.multiply.outer(w, ax.weights)
        return w


def make_uniform_grid(min: float, max: float, n: int, boundary: str = DECAY_BOX) -> Grid1D:
    return Grid1D(min, max, n, boundary)


def make_decay_box(half_width: float, n: int) -> Grid1D:
    """Symmetric decay-box grid on [-half_width, half_width]."""
    return Grid1D(-half_width, half_width, n, DECAY_BOX)


def photon_grid(omega: float, n: int = 64, half_width_factor: float = 8.0) -> Grid1D:
    """Decay-box for a photon/auxiliary coordinate of frequency omega.

    Half-width 8/sqrt(omega) leaves the vacuum Gaussian below 1e-8 at the box
    edge, so the Dirichlet truncation is negligible.
    """
    return make_decay_box(half_width_factor / np.sqrt(omega), n)


def aligned_photon_grids(omega: float, n_q: int = 48,
                         half_width_factor: float = 8.0) -> tuple[Grid1D, Grid1D]:
    """(p_grid, q_grid) such that (q_i + q_j)/sqrt(2) hits p-grid points exactly.

    p spans sqrt(2) times the q box with n_p = 2 n_q - 1, i.e. dp = dq/sqrt(2);
    used by the embedding tests so spline evaluation happens at the knots.
    """
    q = photon_grid(omega, n_q, half_width_factor)
    hw = np.sqrt(2.0) * (half_width_factor / np.sqrt(omega))
    p = make_decay_box(hw, 2 * n_q - 1)
    return p, q


def laplacian_apply(grid: Grid1D, f: np.ndarray, axis: int = 0) -> np.ndarray:
    """Second-order central-difference Laplacian along one axis.

    Out-of-range neighbours count as zero; for hard-wall grids the endpoint
    rows of the result are pinned to zero as well, so the operator maps the
    constrained subspace to itself (and is symmetric there).
    """
    f = np.asarray(f)
    if f.shape[axis] != grid.n:
        raise GridError(f"length-mismatch: field has {f.shape[axis]} points, grid {grid.n}")
    f = np.moveaxis(f, axis, 0)
    out = -2.0 * f
    out[1:] += f[:-1]
    out[:-1] += f[1:]
    out /= grid.dx**2
    if grid.boundary == HARD_WALL:
        out[0] = 0.0
        out[-1] = 0.0
    return np.moveaxis(out, 0, axis)


def integrate(grids, f: np.ndarray):
    """Trapezoidal quadrature over one grid or a ProductGrid (all axes)."""
    axes = grids.axes if isinstance(grids, ProductGrid) else (grids,)
    f = np.asarray(f)
    if f.ndim != len(axes):
        raise GridError(f"length-mismatch: field rank {f.ndim} vs grid rank {len(axes)}")
    for i, ax in enumerate(axes):
        if f.shape[i] != ax.n:
            raise GridError(f"length-mismatch on axis {i}: {f.shape[i]} vs {ax.n}")
    out = f
    for ax in reversed(axes):
        out = out @ ax.weights  # contracts the current last axis
    return out


def _dirichlet_size(grid: Grid1D) -> int:
    return grid.n_active


def kinetic_eigenvalues(grid: Grid1D) -> np.ndarray:
    """Eigenvalues of -1/2 * FD Laplacian on the grid's active points."""
    m = _dirichlet_size(grid)
    k = np.arange(1, m + 1)
    return (1.0 - np.cos(k * np.pi / (m + 1))) / grid.dx**2


def dst_forward(f: np.ndarray, axis: int) -> np.ndarray:
    """Orthonormal type-I DST along axis (its own inverse)."""
    m = f.shape[axis]
    return dst(f, type=1, axis=axis) / np.sqrt(2.0 * (m + 1))
