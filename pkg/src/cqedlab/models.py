"""Catalogue of the physical models: a two-site dimer and 1D soft-Coulomb
helium, both coupled to a single cavity mode in dipole approximation, plus the
interaction flags that select the ablated/scaled system variants.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .grids import Grid1D, HARD_WALL, SiteBasis, make_uniform_grid, photon_grid

TWO_SITE = "two-site"
HELIUM_1D = "helium-1d"

# Singlet-sector site dipoles: one electron on site 1 contributes -1/2, on
# site 2 +1/2, so the doubly-occupied configurations carry total dipole -1/+1.
TWO_SITE_DIPOLES = (-0.5, +0.5)


@dataclass(frozen=True)
class InteractionFlags:
    """Ablations and scalings of the light-matter Hamiltonian.

    bilinear_scale multiplies the one-body bilinear coupling of the dressed
    potential (s=1 physical, s=sqrt(2) and s=2 are the sqrt(s)/tilde scalings);
    when != 1 the two-body bilinear is dropped entirely (tilde systems).
    """

    include_w: bool = True
    include_quadratic: bool = True
    bilinear_scale: float = 1.0
    tilde: bool = False  # drop the two-body bilinear even at bilinear_scale=1

    @property
    def is_tilde(self) -> bool:
        return self.tilde or self.bilinear_scale != 1.0


PHYSICAL = InteractionFlags()


@dataclass(frozen=True)
class ModelSystem:
    """Problem definition shared by all solvers (immutable after construction)."""

    kind: str
    omega: float
    lam: float
    hopping: float = 0.0
    jdot: Callable[[float], float] | None = None  # external-current derivative, default 0
    n_electrons: int = 2
    n_modes: int = 1
    flags: InteractionFlags = PHYSICAL
    x_min: float = -5.0
    x_max: float = 5.0

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.kind not in (TWO_SITE, HELIUM_1D):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.n_electrons != 2 or self.n_modes != 1:
            raise ValueError("solvers support exactly N=2 electrons and M=1 mode")

    def jdot_at(self, t: float) -> float:
        return 0.0 if self.jdot is None else float(self.jdot(t))

    def with_flags(self, **kw) -> "ModelSystem":
        return replace(self, flags=replace(self.flags, **kw))

    def with_lambda(self, lam: float) -> "ModelSystem":
        return replace(self, lam=lam)

    def x_grid(self, n: int = 201) -> Grid1D:
        if self.kind != HELIUM_1D:
            raise ValueError("x_grid is only defined for the helium model")
        return make_uniform_grid(self.x_min, self.x_max, n, HARD_WALL)

    def site_basis(self) -> SiteBasis:
        if self.kind != TWO_SITE:
            raise ValueError("site_basis is only defined for the two-site model")
        return SiteBasis(labels=("site1", "site2"), dipoles=TWO_SITE_DIPOLES)

    def mode_grid(self, n: int = 64, half_width_factor: float = 8.0) -> Grid1D:
        return photon_grid(self.omega, n, half_width_factor)


@dataclass(frozen=True)
class PotentialTables:
    """Sampled external potential and two-body interaction."""

    v_of_x: np.ndarray
    w_of_xx: np.ndarray
    site_dipole: tuple = TWO_SITE_DIPOLES


def soft_coulomb_v(x: np.ndarray) -> np.ndarray:
    return -2.0 / np.sqrt(x**2 + 1.0)


def soft_coulomb_w(x: np.ndarray, xp: np.ndarray) -> np.ndarray:
    return 1.0 / np.sqrt((x[:, None] - xp[None, :]) ** 2 + 1.0)


def soft_coulomb_tables(xgrid: Grid1D) -> PotentialTables:
    """v(x) = -2/sqrt(x^2+1), w(x,x') = 1/sqrt((x-x')^2+1) on the grid."""
    x = xgrid.points
    return PotentialTables(v_of_x=soft_coulomb_v(x), w_of_xx=soft_coulomb_w(x, x))


def make_two_site_model(hopping: float, omega: float, lam: float,
                        flags: InteractionFlags = PHYSICAL) -> ModelSystem:
    """Two-site dimer with v = w = 0 and site dipoles (-1/2, +1/2)."""
    return ModelSystem(kind=TWO_SITE, omega=omega, lam=lam, hopping=hopping, flags=flags)


def make_helium_model(omega: float, lam: float,
                      flags: InteractionFlags = PHYSICAL) -> ModelSystem:
    """1D soft-Coulomb helium in [-5, 5] with hard walls, one cavity mode."""
    return ModelSystem(kind=HELIUM_1D, omega=omega, lam=lam, flags=flags)


def vacuum_gaussian(grid: Grid1D, omega: float, center: float = 0.0) -> np.ndarray:
    """Harmonic-oscillator ground amplitude (omega/pi)^(1/4) exp(-omega q^2/2)."""
    q = grid.points - center
    return (omega / np.pi) ** 0.25 * np.exp(-0.5 * omega * q**2)


def discrete_vacuum(grid: Grid1D, omega: float) -> np.ndarray:
    """Ground state of the grid oscillator -1/2 D^2 + omega^2 q^2 / 2.

    This is the uncoupled photon ground state *of the discretized model*: unlike
    the sampled continuum Gaussian it is exactly stationary under the grid
    propagators, which keeps stationarity and constant-fluctuation statements
    meaningful at finite dq.
    """
    from scipy.linalg import eigh_tridiagonal

    d = 1.0 / grid.dx**2 + 0.5 * omega**2 * grid.points**2
    e = np.full(grid.n - 1, -0.5 / grid.dx**2)
    _, vecs = eigh_tridiagonal(d, e, select="i", select_range=(0, 0))
    v = vecs[:, 0]
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    return v / np.sqrt(np.sum(v**2) * grid.dx)
