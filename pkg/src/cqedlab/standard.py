"""Standard cavity Kohn-Sham propagator: doubly-occupied electron orbital
coupled to the mode expectations through the mean-field term, with the photon
displacement advanced by the analytic Maxwell solution (exact homogeneous part
plus trapezoidal Duhamel source). A photon orbital is carried only when field
fluctuations are requested.
"""

from __future__ import annotations

import numpy as np

from .dressed import _electron_axis, hartree_exchange
from .grids import Grid1D, ProductGrid
from .hamiltonian import HamiltonianAction, KineticAxis
from .models import HELIUM_1D, ModelSystem, discrete_vacuum
from .series import Recorder, SeriesBuilder
from .states import StandardKSState, uniform_cell
from .steppers import _check_finite, make_stepper

MEAN_FIELD = "mean-field"
MX_VARIANT = "mx"


def standard_potential(model: ModelSystem, xaxis, n_x: np.ndarray, R: float,
                       p: float, variant: str) -> np.ndarray:
    """Electron potential v + [lam R - omega p] lam d + v_mxc(variant).

    mean-field: v_mxc = v_Hx; mx additionally carries the exchange-corrected
    dipole self-interaction (lam d)^2/2 - (lam R)(lam d)/2. Quadratic-flagged
    pieces (everything with two powers of lambda) follow include_quadratic.
    """
    if variant not in (MEAN_FIELD, MX_VARIANT):
        raise ValueError(f"unknown standard-KS variant {variant!r}")
    _, dip, v = _electron_axis(model, xaxis)
    om, lam = model.omega, model.lam
    pot = v + hartree_exchange(model, xaxis, n_x)
    pot = pot - (om * p) * lam * dip
    if model.flags.include_quadratic:
        pot = pot + (lam * R) * lam * dip
        if variant == MX_VARIANT:
            pot = pot + 0.5 * lam**2 * dip**2 - 0.5 * (lam * R) * lam * dip
    return pot


def mean_field_coupling_dressed(model: ModelSystem, xaxis, qgrid, R: float,
                                p: float) -> np.ndarray:
    """The standard-KS mean-field light-matter term written on the dressed
    (x, q) grid: [lam R - omega p] lam d - (omega/sqrt2) q lam R."""
    _, dip, _ = _electron_axis(model, xaxis)
    om, lam = model.omega, model.lam
    return ((lam * R - om * p) * lam * dip[:, None]
            - (om / np.sqrt(2.0)) * qgrid.points[None, :] * lam * R)


def maxwell_step(p: float, pdot: float, model: ModelSystem, dt: float,
                 R_now: float, R_next: float, t: float = 0.0) -> tuple[float, float]:
    """One step of p'' = -omega^2 p + omega lam R - Jdot/omega: exact rotation
    for the homogeneous part, trapezoidal Duhamel for the source."""
    om = model.omega
    th = om * dt
    c, s = np.cos(th), np.sin(th)
    src_now = om * model.lam * R_now - model.jdot_at(t) / om
    src_next = om * model.lam * R_next - model.jdot_at(t + dt) / om
    p_new = c * p + (s / om) * pdot + 0.5 * dt * (s / om) * src_now
    pdot_new = -om * s * p + c * pdot + 0.5 * dt * (c * src_now + src_next)
    return float(p_new), float(pdot_new)


def photon_orbital_hamiltonian(model: ModelSystem, pgrid: Grid1D, R: float,
                               t: float = 0.0) -> HamiltonianAction:
    om = model.omega
    pot = (0.5 * om**2 * pgrid.points**2 - om * model.lam * R * pgrid.points
           + (model.jdot_at(t) / om) * pgrid.points)
    return HamiltonianAction(ProductGrid((pgrid,)), (KineticAxis(pgrid),), pot, model)


def initial_standard_state(model: ModelSystem, xaxis, electron_orbital: np.ndarray,
                           pgrid: Grid1D | None = None,
                           fluctuations: bool = True) -> StandardKSState:
    orb = np.asarray(electron_orbital, dtype=complex)
    st = StandardKSState(ProductGrid((xaxis,)), orb)
    if fluctuations:
        pgrid = pgrid or model.mode_grid()
        st.photon_grids = ProductGrid((pgrid,))
        st.photon_orbital = discrete_vacuum(pgrid, model.omega).astype(complex)
    return st.normalize()


def standard_observables(state: StandardKSState, model: ModelSystem) -> dict:
    xaxis = state.electron_grids.axes[0]
    _, dip, _ = _electron_axis(model, xaxis)
    n_x = state.density()
    R = float((n_x * xaxis.weights) @ dip)
    out = {"norm": state.norm(), "n_x": n_x, "dipole_R": R,
           "p": state.p, "pdot": state.pdot, "delta_p": np.nan}
    if state.photon_orbital is not None:
        pg = state.photon_grids.axes[0]
        rho = np.abs(state.photon_orbital) ** 2
        z = float(rho @ pg.weights)
        pexp = float((rho * pg.weights) @ pg.points) / z
        p2 = float((rho * pg.weights) @ pg.points**2) / z
        out["p_orbital"] = pexp
        out["delta_p"] = p2 - pexp**2
    return out


def standard_total_energy(state: StandardKSState, model: ModelSystem,
                          variant: str) -> float:
    """Conserved mean-field functional: matter + interaction + classical field
    energy (plus the omega/2 vacuum constant)."""
    xaxis = state.electron_grids.axes[0]
    kin, dip, v = _electron_axis(model, xaxis)
    grids = ProductGrid((xaxis,))
    h0 = HamiltonianAction(grids, (kin,), v.copy(), model)
    cell = uniform_cell(grids)
    e_one = 2.0 * float(np.vdot(state.orbital, h0.apply(state.orbital)).real) * cell
    n_x = state.density()
    R = float((n_x * xaxis.weights) @ dip)
    om, lam = model.omega, model.lam
    e = e_one
    if model.kind == HELIUM_1D and model.flags.include_w:
        vh = hartree_exchange(model, xaxis, n_x)
        e += 0.5 * float((vh * n_x) @ xaxis.weights)
    if model.flags.include_quadratic:
        if variant == MX_VARIANT:
            e += 0.5 * lam**2 * float((n_x * xaxis.weights) @ dip**2) + 0.25 * (lam * R) ** 2
        else:
            e += 0.5 * (lam * R) ** 2
    e += -om * lam * R * state.p + 0.5 * state.pdot**2 + 0.5 * om**2 * state.p**2
    return e + 0.5 * om


def propagate_standard(state: StandardKSState, model: ModelSystem, variant: str,
                       dt: float, steps: int, recorder: Recorder | None = None,
                       scheme: str = "crank-nicolson", t0: float = 0.0):
    """Predictor-corrector over the electron orbital plus the Maxwell update;
    the photon orbital (if carried) rides along under the shifted oscillator."""
    recorder = recorder or Recorder()
    xaxis = state.electron_grids.axes[0]
    kin, dip, v = _electron_axis(model, xaxis)
    grids = state.electron_grids
    h = HamiltonianAction(
        grids, (kin,),
        standard_potential(model, xaxis, state.density(), 0.0, 0.0, variant), model)
    half = make_stepper(scheme, h, 0.5 * dt)
    full = make_stepper(scheme, h, dt)

    ph_h = ph_half = ph_full = None
    if state.photon_orbital is not None and recorder.fluctuations:
        ph_h = photon_orbital_hamiltonian(model, state.photon_grids.axes[0], 0.0)
        ph_full = make_stepper(scheme, ph_h, dt)

    builder = SeriesBuilder()

    def refresh(st, R=None):
        obs = standard_observables(st, model)
        h.set_potential(standard_potential(model, xaxis, obs["n_x"],
                                           obs["dipole_R"] if R is None else R,
                                           st.p, variant))
        return obs

    def sample(i, obs):
        builder.add_row(t0 + i * dt, norm=obs["norm"],
                        energy=standard_total_energy(state, model, variant),
                        dipole_R=obs["dipole_R"], p=state.p, pdot=state.pdot,
                        delta_p=obs["delta_p"])
        if recorder.densities:
            builder.add_density("n_x", obs["n_x"])

    obs = refresh(state)
    sample(0, obs)
    mid = state.copy()
    for i in range(1, steps + 1):
        t = t0 + (i - 1) * dt
        obs = refresh(state)
        R_now = obs["dipole_R"]
        # predictor: midpoint field and density
        mid.orbital = half.step(state.orbital)
        mid.p, mid.pdot = maxwell_step(state.p, state.pdot, model, 0.5 * dt,
                                       R_now, R_now, t)
        obs_mid = standard_observables(mid, model)
        h.set_potential(standard_potential(model, xaxis, obs_mid["n_x"],
                                           obs_mid["dipole_R"], mid.p, variant))
        # corrector: unitary full step with midpoint potential
        state.orbital = full.step(state.orbital)
        obs_new = standard_observables(state, model)
        state.p, state.pdot = maxwell_step(state.p, state.pdot, model, dt,
                                           R_now, obs_new["dipole_R"], t)
        if ph_full is not None:
            ph_h.set_potential(photon_orbital_hamiltonian(
                model, state.photon_grids.axes[0], obs_mid["dipole_R"],
                t + 0.5 * dt).potential)
            state.photon_orbital = ph_full.step(state.photon_orbital)
        if i % recorder.stride == 0 or i == steps:
            _check_finite(state.orbital, f"standard propagation step {i}")
            sample(i, standard_observables(state, model))
    return builder.build(meta={"solver": "standard-ks", "variant": variant,
                               "scheme": scheme, "dt": dt})
