"""Exact reference solutions: correlated ground/excited states and real-time
propagation in the physical representations, plus the paper's two initial
states (two-site singlet superposition, helium ground state times the photon
vacuum).
"""

from __future__ import annotations

import numpy as np

from .eigen import excited_state, ground_state, parity_project
from .grids import Grid1D, ProductGrid
from .hamiltonian import HamiltonianAction, build_exact_hamiltonian, two_site_config_basis
from .models import ModelSystem, discrete_vacuum, vacuum_gaussian
from .series import Recorder, SeriesBuilder
from .states import (DRESSED_PAIR, ELECTRON_PAIR, HELIUM_GRID, TWO_SITE_REP,
                     TWO_SITE_TOTAL_DIPOLE, ExactState, exchange_symmetrize,
                     normalized)
from .steppers import PropagationError, make_stepper, _check_finite
from .transform import reduce_dressed_density

SQRT2 = np.sqrt(2.0)


# ---------------------------------------------------------------------------
# stationary states
# ---------------------------------------------------------------------------

def exact_ground_state(model: ModelSystem, grids: ProductGrid, representation: str,
                       tol: float = 1e-9, v0: np.ndarray | None = None,
                       dtau: float = 0.01) -> tuple[float, ExactState]:
    h = build_exact_hamiltonian(model, grids, representation)
    sym = lambda x: exchange_symmetrize(representation, x)
    e, psi = ground_state(h, tol=tol, v0=v0, symmetrize=sym, dtau=dtau)
    return e, ExactState(representation, grids, psi.astype(complex))


def exact_excited_state(model: ModelSystem, grids: ProductGrid, representation: str,
                        below: list[ExactState], tol: float = 1e-9,
                        odd_parity: bool = False, dtau: float = 0.01
                        ) -> tuple[float, ExactState]:
    """Lowest eigenpair orthogonal to `below`; optionally restricted to the
    dipole-active (parity-odd) sector."""
    h = build_exact_hamiltonian(model, grids, representation)
    sym = lambda x: exchange_symmetrize(representation, x)
    proj = parity_project(grids, -1) if odd_parity else None
    e, psi = excited_state(h, [s.psi for s in below], tol=tol,
                           symmetrize=sym, project=proj, dtau=dtau)
    return e, ExactState(representation, grids, psi.astype(complex))


def bare_helium_states(model: ModelSystem, xgrid: Grid1D, tol: float = 1e-9):
    """(E0, psi0), (E1, psi1) of the bare matter problem on (x1, x2); psi1 is
    the lowest dipole-active (odd) singlet state."""
    grids = ProductGrid((xgrid, xgrid))
    e0, s0 = exact_ground_state(model, grids, ELECTRON_PAIR, tol=tol)
    e1, s1 = exact_excited_state(model, grids, ELECTRON_PAIR, [s0], tol=tol,
                                 odd_parity=True)
    return (e0, s0), (e1, s1)


# ---------------------------------------------------------------------------
# initial states
# ---------------------------------------------------------------------------

def _vacuum(pgrid: Grid1D, omega: float, vacuum: str) -> np.ndarray:
    if vacuum == "discrete":
        return discrete_vacuum(pgrid, omega)
    if vacuum == "gaussian":
        return vacuum_gaussian(pgrid, omega)
    raise ValueError(f"unknown vacuum kind {vacuum!r}")


def two_site_initial_state(model: ModelSystem, pgrid: Grid1D,
                           vacuum: str = "discrete") -> ExactState:
    """Spin-singlet (sqrt(1/4) c1 + sqrt(3/4) c2)-pattern electrons, photon
    vacuum: amplitudes (1/4, sqrt(6)/4, 3/4) on {|20>, |11,S>, |02>}."""
    a, b = np.sqrt(0.25), np.sqrt(0.75)
    elec = np.array([a * a, SQRT2 * a * b, b * b])
    psi = np.multiply.outer(elec, _vacuum(pgrid, model.omega, vacuum)).astype(complex)
    grids = ProductGrid((two_site_config_basis(), pgrid))
    return ExactState(TWO_SITE_REP, grids, normalized(grids, psi))


def helium_initial_state(psi0: ExactState, pgrid: Grid1D, omega: float,
                         vacuum: str = "discrete") -> ExactState:
    """Bare ground state tensor photon vacuum on (x1, x2, p)."""
    if psi0.representation != ELECTRON_PAIR:
        raise ValueError("expected a bare (x1,x2) state")
    xg1, xg2 = psi0.grids.axes
    psi = psi0.psi[:, :, None] * _vacuum(pgrid, omega, vacuum)[None, None, :]
    grids = ProductGrid((xg1, xg2, pgrid))
    return ExactState(HELIUM_GRID, grids, normalized(grids, psi.astype(complex)))


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------

def _gradient_axis(psi: np.ndarray, dx: float, axis: int) -> np.ndarray:
    out = np.zeros_like(psi)
    f = np.moveaxis(psi, axis, 0)
    o = np.moveaxis(out, axis, 0)
    o[1:-1] = (f[2:] - f[:-2]) / (2 * dx)
    return out


def exact_observables(state: ExactState, h: HamiltonianAction | None = None,
                      want_pair_density: bool = False) -> dict:
    """Norm, energy (if h given), density/occupations, dipole, p, p^2, Delta p."""
    psi = state.psi
    rho = np.abs(psi) ** 2
    out: dict = {"norm": state.norm()}
    if h is not None:
        out["energy"] = h.expectation(psi)

    if state.representation == TWO_SITE_REP:
        basis, pg = state.grids.axes
        wp = pg.weights
        occ_cfg = rho @ wp                      # weight of each configuration
        out["occupations"] = np.array([
            2 * occ_cfg[0] + occ_cfg[1],        # site 1
            occ_cfg[1] + 2 * occ_cfg[2],        # site 2
        ])
        out["dipole_R"] = float(occ_cfg @ TWO_SITE_TOTAL_DIPOLE)
        rho_p = rho.T @ np.ones(basis.n)        # plain sum over configs
        p = float((rho_p * wp) @ pg.points)
        p2 = float((rho_p * wp) @ pg.points**2)
        out["pdot"] = _pdot(state, axis=1)
    elif state.representation == HELIUM_GRID:
        xg1, xg2, pg = state.grids.axes
        wx = xg2.weights
        wp = pg.weights
        out["n_x"] = 2.0 * np.einsum("abp,b,p->a", rho, wx, wp)
        out["dipole_R"] = float((out["n_x"] * xg1.weights) @ xg1.points)
        rho_p = np.einsum("abp,a,b->p", rho, xg1.weights, wx)
        p = float((rho_p * wp) @ pg.points)
        p2 = float((rho_p * wp) @ pg.points**2)
        out["pdot"] = _pdot(state, axis=2)
        if want_pair_density:
            out["rho2"] = np.einsum("abp,p->ab", rho, wp)
    elif state.representation == ELECTRON_PAIR:
        xg1, xg2 = state.grids.axes
        out["n_x"] = 2.0 * rho @ xg2.weights
        out["dipole_R"] = float((out["n_x"] * xg1.weights) @ xg1.points)
        p = p2 = 0.0
        out["pdot"] = 0.0
        if want_pair_density:
            out["rho2"] = rho
    elif state.representation == DRESSED_PAIR:
        red = reduce_dressed_density(state, want_pair_density=want_pair_density)
        out["n_x"] = red["n_x"]
        xg = state.grids.axes[0]
        out["dipole_R"] = float((red["n_x"] * xg.weights) @ xg.points)
        p = red["p"]
        p2 = red["delta_p"] + p**2
        out["n_prime"] = red["n_prime"]
        out["delta_p_nprime"] = red["delta_p_nprime"]
        out["pdot"] = float("nan")
        if want_pair_density:
            out["rho2_prime"] = red["rho2_prime"]
    else:
        raise ValueError(f"unknown representation {state.representation!r}")

    out["p"] = p
    out["p2"] = p2
    out["delta_p"] = p2 - p**2
    return out


def _pdot(state: ExactState, axis: int) -> float:
    """<d p/dt> = Im <Psi| d/dp |Psi> under the uniform measure."""
    pg = state.grids.axes[axis]
    grad = _gradient_axis(state.psi, pg.dx, axis)
    cell = 1.0
    for i, ax in enumerate(state.grids.axes):
        w = ax.weights
        cell *= w[1] if w.size > 2 else w[0]
    return float(np.imag(np.vdot(state.psi, grad)) * cell)


def electron_current(state: ExactState) -> np.ndarray:
    """Physical current j(x,t) reduced onto the first electron coordinate."""
    if state.representation == HELIUM_GRID:
        xg1, xg2, pg = state.grids.axes
        grad = _gradient_axis(state.psi, xg1.dx, 0)
        cur = 2.0 * np.imag(np.conj(state.psi) * grad)
        return np.einsum("abp,b,p->a", cur, xg2.weights, pg.weights)
    if state.representation == ELECTRON_PAIR:
        xg1, xg2 = state.grids.axes
        grad = _gradient_axis(state.psi, xg1.dx, 0)
        return 2.0 * np.imag(np.conj(state.psi) * grad) @ xg2.weights
    raise ValueError("electron current needs a grid representation")


# ---------------------------------------------------------------------------
# propagation
# ---------------------------------------------------------------------------

def propagate_exact(state: ExactState, h: HamiltonianAction, dt: float, steps: int,
                    recorder: Recorder | None = None, scheme: str = "strang"):
    """Unitary propagation of the correlated state; returns ObservableSeries.

    The state is advanced in place; observables are sampled every
    recorder.stride steps (including t=0 and the final step).
    """
    recorder = recorder or Recorder()
    stepper = make_stepper(scheme, h, dt)
    builder = SeriesBuilder()

    def sample(i):
        obs = exact_observables(state, h)
        row = {k: obs.get(k, np.nan) for k in
               ("norm", "energy", "dipole_R", "p", "pdot", "delta_p")}
        builder.add_row(i * dt, **row)
        if recorder.densities and "n_x" in obs:
            builder.add_density("n_x", obs["n_x"])
        if recorder.densities and "occupations" in obs:
            builder.add_density("occupations", obs["occupations"])
        if recorder.currents and state.representation in (HELIUM_GRID, ELECTRON_PAIR):
            builder.add_density("j_x", electron_current(state))

    sample(0)
    for i in range(1, steps + 1):
        state.psi = stepper.step(state.psi)
        if i % recorder.stride == 0 or i == steps:
            _check_finite(state.psi, f"exact propagation step {i}")
            sample(i)
    return builder.build(meta={"solver": "exact", "scheme": scheme, "dt": dt,
                               "representation": state.representation})
