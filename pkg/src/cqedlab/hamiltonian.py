"""Hamiltonian actions on product grids.

A HamiltonianAction bundles per-axis kinetic operators (finite-difference
Laplacians on grid axes, dense blocks on site axes) with a diagonal potential
over the product grid. One structure serves the exact representations, the
dressed single-orbital equations, and the standard-KS orbitals, so every
propagator and eigensolver runs through the same code path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .grids import Grid1D, HARD_WALL, ProductGrid, SiteBasis, kinetic_eigenvalues
from .models import (HELIUM_1D, ModelSystem, TWO_SITE, soft_coulomb_tables,
                     soft_coulomb_v, soft_coulomb_w)
from .states import (DRESSED_PAIR, ELECTRON_PAIR, HELIUM_GRID,
                     TWO_SITE_CONFIGS, TWO_SITE_REP, TWO_SITE_TOTAL_DIPOLE,
                     uniform_cell)

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class KineticAxis:
    """Kinetic operator along one axis: -1/2 d^2/dz^2 on a grid, or a dense block."""

    grid: object
    matrix: np.ndarray | None = None  # dense block (site axes); None -> FD Laplacian

    @property
    def is_grid(self) -> bool:
        return self.matrix is None

    def dense(self) -> np.ndarray:
        """Dense matrix on the axis' active points (testing and CN assembly)."""
        if not self.is_grid:
            return self.matrix
        g: Grid1D = self.grid
        m = g.n_active
        d = np.full(m, 1.0 / g.dx**2)
        off = np.full(m - 1, -0.5 / g.dx**2)
        return np.diag(d) + np.diag(off, 1) + np.diag(off, -1)


def _stencil_apply(axis_idx: int, grid: Grid1D, psi: np.ndarray, out: np.ndarray):
    """Accumulate -1/2 * FD Laplacian along axis_idx into out."""
    f = np.moveaxis(psi, axis_idx, 0)
    o = np.moveaxis(out, axis_idx, 0)
    c = 0.5 / grid.dx**2
    if grid.boundary == HARD_WALL:
        o[1:-1] += c * (2.0 * f[1:-1] - f[:-2] - f[2:])
    else:
        o += (2.0 * c) * f
        o[1:] -= c * f[:-1]
        o[:-1] -= c * f[1:]


def _dense_apply(axis_idx: int, mat: np.ndarray, psi: np.ndarray, out: np.ndarray):
    f = np.moveaxis(psi, axis_idx, 0)
    o = np.moveaxis(out, axis_idx, 0)
    o += np.tensordot(mat, f, axes=(1, 0))


@dataclass
class HamiltonianAction:
    """H = sum of per-axis kinetic terms + diagonal potential.

    The potential may be replaced between steps (self-consistent schemes);
    bump ``potential_version`` so steppers know to refresh cached factors.
    """

    grids: ProductGrid
    axes: tuple
    potential: np.ndarray
    model: ModelSystem | None = None
    potential_version: int = 0

    def set_potential(self, v: np.ndarray):
        self.potential = v
        self.potential_version += 1

    def apply(self, psi: np.ndarray) -> np.ndarray:
        out = self.potential * psi
        for i, ax in enumerate(self.axes):
            if ax.is_grid:
                _stencil_apply(i, ax.grid, psi, out)
            else:
                _dense_apply(i, ax.matrix, psi, out)
        self._pin_walls(out)
        return out

    def _pin_walls(self, arr: np.ndarray):
        for i, ax in enumerate(self.axes):
            if ax.is_grid and ax.grid.boundary == HARD_WALL:
                sl = [slice(None)] * arr.ndim
                for edge in (0, -1):
                    sl[i] = edge
                    arr[tuple(sl)] = 0.0
        return arr

    def expectation(self, psi: np.ndarray) -> float:
        cell = uniform_cell(self.grids)
        num = np.vdot(psi, self.apply(psi)).real * cell
        den = np.vdot(psi, psi).real * cell
        return float(num / den)

    def residual(self, psi: np.ndarray) -> float:
        """|| H psi - <H> psi || / ||psi|| under the uniform measure."""
        hpsi = self.apply(psi)
        cell = uniform_cell(self.grids)
        nrm2 = np.vdot(psi, psi).real
        e = np.vdot(psi, hpsi).real / nrm2
        r = hpsi - e * psi
        return float(np.sqrt(np.vdot(r, r).real / nrm2))

    def gershgorin_bounds(self) -> tuple[float, float]:
        lo = float(np.min(self.potential))
        hi = float(np.max(self.potential))
        for ax in self.axes:
            if ax.is_grid:
                hi += 2.0 / ax.grid.dx**2
            else:
                ev = np.linalg.eigvalsh(ax.matrix)
                lo += float(ev[0])
                hi += float(ev[-1])
        return lo, hi

    # -- spectral data used by the split-step (Strang) scheme --------------

    def axis_spectra(self):
        """(eigenvalues, eigenvectors-or-None) per axis; None marks a DST axis."""
        out = []
        for ax in self.axes:
            if ax.is_grid:
                out.append((kinetic_eigenvalues(ax.grid), None))
            else:
                ev, u = np.linalg.eigh(ax.matrix)
                out.append((ev, u))
        return out

    # -- sparse assembly (Crank-Nicolson, small systems) --------------------

    def active_slices(self) -> tuple:
        return tuple(ax.grid.interior if ax.is_grid else slice(None) for ax in self.axes)

    def sparse_active(self) -> sp.csr_matrix:
        """Sparse H restricted to active (non-pinned) points."""
        mats = []
        for ax in self.axes:
            if ax.is_grid:
                g = ax.grid
                m = g.n_active
                mats.append(sp.diags(
                    [np.full(m - 1, -0.5 / g.dx**2), np.full(m, 1.0 / g.dx**2),
                     np.full(m - 1, -0.5 / g.dx**2)], [-1, 0, 1]))
            else:
                mats.append(sp.csr_matrix(ax.matrix))
        h = None
        eyes = [sp.identity(m.shape[0]) for m in mats]
        for i, m in enumerate(mats):
            term = None
            for j, e in enumerate(eyes):
                f = m if j == i else e
                term = f if term is None else sp.kron(term, f)
            h = term if h is None else h + term
        vact = self.potential[self.active_slices()]
        return (h + sp.diags(np.ascontiguousarray(vact).ravel())).tocsr()


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def two_site_hopping_matrix(t: float) -> np.ndarray:
    """Singlet-sector hopping in the {|20>, |11,S>, |02>} basis."""
    h = -SQRT2 * t
    return np.array([[0.0, h, 0.0], [h, 0.0, h], [0.0, h, 0.0]])


def single_particle_hopping(t: float) -> np.ndarray:
    return np.array([[0.0, -t], [-t, 0.0]])


def two_site_config_basis() -> SiteBasis:
    return SiteBasis(labels=TWO_SITE_CONFIGS, dipoles=tuple(TWO_SITE_TOTAL_DIPOLE))


def _mode_potential(model: ModelSystem, p: np.ndarray, dip: np.ndarray, t: float) -> np.ndarray:
    """Photon-sector potential over (electronic dipole, p): expanded
    1/2 (omega p - lambda d)^2 with flag-controlled terms, plus the external
    current drive."""
    f = model.flags
    om, lam = model.omega, model.lam
    v = 0.5 * om**2 * p[None, :] ** 2
    v = v - f.bilinear_scale * om * lam * dip[:, None] * p[None, :]
    if f.include_quadratic:
        v = v + 0.5 * lam**2 * dip[:, None] ** 2
    v = v + (model.jdot_at(t) / om) * p[None, :]
    return v


def build_exact_hamiltonian(model: ModelSystem, grids: ProductGrid,
                            representation: str, t: float = 0.0) -> HamiltonianAction:
    """Hermitian action of the full correlated Hamiltonian.

    Representations: 'two-site' on (configuration, p); 'helium-grid' on
    (x1, x2, p); 'electron-pair' on (x1, x2) (bare matter problem);
    'dressed-pair' on (x1, q1, x2, q2), where interaction flags with
    bilinear_scale != 1 (or flags.is_tilde) select the redistributed
    one-body bilinear and drop the two-body one.
    """
    f = model.flags
    om, lam = model.omega, model.lam

    if representation == TWO_SITE_REP:
        if model.kind != TWO_SITE:
            raise ValueError("representation-grid mismatch: two-site rep needs a two-site model")
        basis, pg = grids.axes
        if basis.n != 3:
            raise ValueError("two-site exact representation needs the 3-state singlet basis")
        dip = np.asarray(basis.dipoles, dtype=float)
        v = _mode_potential(model, pg.points, dip, t)
        axes = (KineticAxis(basis, two_site_hopping_matrix(model.hopping)), KineticAxis(pg))
        return HamiltonianAction(grids, axes, v, model)

    if model.kind != HELIUM_1D:
        raise ValueError(f"representation-grid mismatch: {representation} needs the helium model")

    if representation == ELECTRON_PAIR:
        x1g, x2g = grids.axes
        x1 = x1g.points[:, None]
        x2 = x2g.points[None, :]
        v = soft_coulomb_v(x1) + soft_coulomb_v(x2)
        if f.include_w:
            v = v + 1.0 / np.sqrt((x1 - x2) ** 2 + 1.0)
        axes = (KineticAxis(x1g), KineticAxis(x2g))
        return HamiltonianAction(grids, axes, np.broadcast_to(v, grids.shape).copy(), model)

    if representation == HELIUM_GRID:
        x1g, x2g, pg = grids.axes
        x1 = x1g.points[:, None, None]
        x2 = x2g.points[None, :, None]
        p = pg.points[None, None, :]
        dtot = x1 + x2
        v = soft_coulomb_v(x1) + soft_coulomb_v(x2) + 0.5 * om**2 * p**2
        v = v - f.bilinear_scale * om * lam * dtot * p
        if f.include_w:
            v = v + 1.0 / np.sqrt((x1 - x2) ** 2 + 1.0)
        if f.include_quadratic:
            v = v + 0.5 * lam**2 * dtot**2
        v = v + (model.jdot_at(t) / om) * p
        axes = (KineticAxis(x1g), KineticAxis(x2g), KineticAxis(pg))
        return HamiltonianAction(grids, axes, np.broadcast_to(v, grids.shape).copy(), model)

    if representation == DRESSED_PAIR:
        x1g, q1g, x2g, q2g = grids.axes
        x1 = x1g.points[:, None, None, None]
        q1 = q1g.points[None, :, None, None]
        x2 = x2g.points[None, None, :, None]
        q2 = q2g.points[None, None, None, :]
        c1 = f.bilinear_scale * om / SQRT2  # one-body bilinear coefficient
        v = (soft_coulomb_v(x1) + soft_coulomb_v(x2)
             + 0.5 * om**2 * (q1**2 + q2**2)
             - c1 * lam * (q1 * x1 + q2 * x2))
        if f.include_w:
            v = v + 1.0 / np.sqrt((x1 - x2) ** 2 + 1.0)
        if f.include_quadratic:
            v = v + 0.5 * lam**2 * (x1**2 + x2**2) + lam**2 * x1 * x2
        if not f.is_tilde:
            # two-body bilinear of w'; redistributed away in the tilde systems
            v = v - (om / SQRT2) * lam * (q1 * x2 + q2 * x1)
        v = v + (model.jdot_at(t) / (SQRT2 * om)) * (q1 + q2)
        axes = (KineticAxis(x1g), KineticAxis(q1g), KineticAxis(x2g), KineticAxis(q2g))
        return HamiltonianAction(grids, axes, np.broadcast_to(v, grids.shape).copy(), model)

    raise ValueError(f"unknown representation {representation!r}")
