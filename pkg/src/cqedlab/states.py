"""State containers shared by the solvers.

Axis orders are fixed: helium-grid states live on (x1, x2, p); two-site states
on (singlet configuration, p); dressed-pair states on (x1, q1, x2, q2);
dressed orbitals on (x, q) or (site, q).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grids import ProductGrid

HELIUM_GRID = "helium-grid"
TWO_SITE_REP = "two-site"
DRESSED_PAIR = "dressed-pair"
ELECTRON_PAIR = "electron-pair"  # bare two-electron problem on (x1, x2)

# singlet configuration basis of the two-site model, in this order
TWO_SITE_CONFIGS = ("|20>", "|11,S>", "|02>")
TWO_SITE_TOTAL_DIPOLE = np.array([-1.0, 0.0, +1.0])


def uniform_cell(grids: ProductGrid) -> float:
    """Product of per-axis uniform quadrature cells (dx per grid axis, 1 per site axis)."""
    cell = 1.0
    for ax in grids.axes:
        w = ax.weights
        cell *= w[1] if w.size > 2 else w[0]
    return cell


def state_norm(grids: ProductGrid, psi: np.ndarray) -> float:
    """L2 norm under the uniform grid measure."""
    return float(np.sqrt(np.vdot(psi, psi).real * uniform_cell(grids)))


def normalized(grids: ProductGrid, psi: np.ndarray) -> np.ndarray:
    return psi / state_norm(grids, psi)


def exchange_symmetrize(representation: str, psi: np.ndarray) -> np.ndarray:
    """Project onto the exchange-symmetric (singlet spatial) sector."""
    if representation == HELIUM_GRID:
        return 0.5 * (psi + psi.swapaxes(0, 1))
    if representation == ELECTRON_PAIR:
        return 0.5 * (psi + psi.T)
    if representation == DRESSED_PAIR:
        return 0.5 * (psi + psi.transpose(2, 3, 0, 1))
    return psi  # two-site singlet basis is symmetric by construction


def exchange_defect(representation: str, psi: np.ndarray) -> float:
    sym = exchange_symmetrize(representation, psi)
    return float(np.max(np.abs(psi - sym)))


@dataclass
class ExactState:
    """Complex amplitudes of the correlated wavefunction on a product grid."""

    representation: str
    grids: ProductGrid
    psi: np.ndarray
    symmetric: bool = True

    def norm(self) -> float:
        return state_norm(self.grids, self.psi)

    def normalize(self) -> "ExactState":
        self.psi = normalized(self.grids, self.psi)
        return self

    def symmetrize(self) -> "ExactState":
        self.psi = exchange_symmetrize(self.representation, self.psi)
        return self

    def copy(self) -> "ExactState":
        return ExactState(self.representation, self.grids, self.psi.copy(), self.symmetric)


@dataclass
class DressedOrbital:
    """Doubly-occupied dressed orbital phi'(x, q) or phi'(site, q); n' = 2|phi'|^2."""

    grids: ProductGrid  # (x-axis or site-axis, q-axis)
    phi: np.ndarray

    def norm(self) -> float:
        return state_norm(self.grids, self.phi)

    def normalize(self) -> "DressedOrbital":
        self.phi = normalized(self.grids, self.phi)
        return self

    def density(self) -> np.ndarray:
        """Dressed density n'(z) = 2 |phi'(z)|^2."""
        return 2.0 * np.abs(self.phi) ** 2

    def copy(self) -> "DressedOrbital":
        return DressedOrbital(self.grids, self.phi.copy())


@dataclass
class StandardKSState:
    """Standard cavity-KS state: doubly-occupied electron orbital, mode
    expectations (p, pdot), and an optional photon orbital for fluctuations."""

    electron_grids: ProductGrid  # single axis: x-grid or site basis
    orbital: np.ndarray
    p: float = 0.0
    pdot: float = 0.0
    photon_grids: ProductGrid | None = None
    photon_orbital: np.ndarray | None = None

    def norm(self) -> float:
        return state_norm(self.electron_grids, self.orbital)

    def normalize(self) -> "StandardKSState":
        self.orbital = normalized(self.electron_grids, self.orbital)
        if self.photon_orbital is not None:
            self.photon_orbital = normalized(self.photon_grids, self.photon_orbital)
        return self

    def density(self) -> np.ndarray:
        return 2.0 * np.abs(self.orbital) ** 2

    def copy(self) -> "StandardKSState":
        return StandardKSState(
            self.electron_grids, self.orbital.copy(), self.p, self.pdot,
            self.photon_grids,
            None if self.photon_orbital is None else self.photon_orbital.copy())
