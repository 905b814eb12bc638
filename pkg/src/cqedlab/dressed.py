"""Dressed Kohn-Sham solver: the doubly-occupied polaritonic orbital
phi'(x,q,t) (or phi'(site,q,t)) under the one-body dressed potential and the
mean-field-exchange (Mx) family of approximations, including the scaled
variants that redistribute the bilinear electron-photon force.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import ground_state as _linear_ground_state
from .grids import Grid1D, ProductGrid, SiteBasis
from .hamiltonian import HamiltonianAction, KineticAxis, single_particle_hopping
from .models import (HELIUM_1D, ModelSystem, TWO_SITE, discrete_vacuum,
                     soft_coulomb_v, soft_coulomb_w, vacuum_gaussian)
from .series import Recorder, SeriesBuilder
from .states import DressedOrbital, uniform_cell
from .steppers import ImaginaryStrangStepper, _check_finite, make_stepper

SQRT2 = np.sqrt(2.0)

MX_NONE = "none"
MX = "mx"
SMX = "smx"
SQRT_SMX = "sqrt-smx"
_ONE_BODY_FACTOR = {MX_NONE: 1.0, MX: 1.0, SMX: 2.0, SQRT_SMX: SQRT2}


@dataclass(frozen=True)
class MxcApproximation:
    """Which mean-field-exchange treatment the dressed propagation uses.

    smx / sqrt-smx differ from mx only in the bilinear coupling: the one-body
    bilinear is scaled by N resp. sqrt(N) and the bilinear pieces of the Mxc
    potential are dropped (they were redistributed into the one-body term).
    """

    name: str = MX
    bilinear_scale_override: float | None = None

    def __post_init__(self):
        if self.name not in _ONE_BODY_FACTOR:
            raise ValueError(f"unknown Mxc approximation {self.name!r}")

    @property
    def one_body_factor(self) -> float:
        if self.bilinear_scale_override is not None:
            return self.bilinear_scale_override
        return _ONE_BODY_FACTOR[self.name]

    @property
    def has_mxc(self) -> bool:
        return self.name != MX_NONE

    @property
    def has_mx_bilinear(self) -> bool:
        return self.name == MX


def _electron_axis(model: ModelSystem, xaxis) -> tuple[KineticAxis, np.ndarray, np.ndarray]:
    """(kinetic axis, dipole values d(x), external potential v(x))."""
    if model.kind == TWO_SITE:
        basis: SiteBasis = xaxis
        return (KineticAxis(basis, single_particle_hopping(model.hopping)),
                np.asarray(basis.dipoles, float), np.zeros(basis.n))
    grid: Grid1D = xaxis
    return KineticAxis(grid), grid.points.copy(), soft_coulomb_v(grid.points)


def dressed_external_potential(model: ModelSystem, zgrids: ProductGrid,
                               approx: MxcApproximation = MxcApproximation(),
                               t: float = 0.0) -> np.ndarray:
    """One-body dressed potential v'(z) on the (x-or-site, q) product grid.

    v' = v + omega^2 q^2 / 2 - s (omega/sqrt(2)) q (lambda d) [+ (lambda d)^2/2]
    + Jdot q / (sqrt(2) omega), with s the approximation's bilinear factor.
    """
    xaxis, qgrid = zgrids.axes
    _, dip, v = _electron_axis(model, xaxis)
    q = qgrid.points
    om, lam = model.omega, model.lam
    s = approx.one_body_factor
    pot = (v[:, None] + 0.5 * om**2 * q[None, :] ** 2
           - s * (om / SQRT2) * lam * dip[:, None] * q[None, :])
    if model.flags.include_quadratic:
        pot = pot + 0.5 * lam**2 * dip[:, None] ** 2
    jd = model.jdot_at(t)
    if jd != 0.0:
        pot = pot + (jd / (SQRT2 * om)) * q[None, :]
    return pot


def hartree_exchange(model: ModelSystem, xaxis, n_x: np.ndarray) -> np.ndarray:
    """Singlet Hartree-exchange potential: half the Hartree potential."""
    if model.kind == TWO_SITE or not model.flags.include_w:
        return np.zeros(len(n_x))
    x = xaxis.points
    return 0.5 * (soft_coulomb_w(x, x) @ (n_x * xaxis.weights))


def mx_potential(model: ModelSystem, zgrids: ProductGrid, n_x: np.ndarray,
                 R: float, p: float, approx: MxcApproximation = MxcApproximation()
                 ) -> np.ndarray:
    """Mxc potential on (x-or-site, q) for the doubly occupied orbital.

    mx:   v_Hx + 1/2 { [lam R - omega p] (lam d) - (omega/sqrt2) q lam R }
    smx / sqrt-smx: v_Hx + 1/2 (lam R)(lam d)   (bilinear pieces redistributed)
    The (lam R)(lam d) piece descends from the quadratic dipole term and is
    ablated together with it.
    """
    xaxis, qgrid = zgrids.axes
    _, dip, _ = _electron_axis(model, xaxis)
    nq = qgrid.n
    if not approx.has_mxc:
        return np.zeros((len(dip), nq))
    om, lam = model.omega, model.lam
    pot = np.broadcast_to(hartree_exchange(model, xaxis, n_x)[:, None],
                          (len(dip), nq)).copy()
    if model.flags.include_quadratic:
        pot += 0.5 * (lam * R) * lam * dip[:, None]
    if approx.has_mx_bilinear:
        pot -= 0.5 * (om * p) * lam * dip[:, None]
        pot -= (om / (2 * SQRT2)) * qgrid.points[None, :] * lam * R
    return pot


def dressed_observables(orb: DressedOrbital, model: ModelSystem) -> dict:
    """n(x), n'(z), dipole R, p, pdot, Delta p, and the dressed bilinear force."""
    xaxis, qgrid = orb.grids.axes
    _, dip, _ = _electron_axis(model, xaxis)
    wq = qgrid.weights
    q = qgrid.points
    nprime = orb.density()
    n_x = nprime @ wq
    wx = xaxis.weights
    R = float((n_x * wx) @ dip)
    p = float(np.einsum("ai,a,i,i->", nprime, wx, wq, q)) / SQRT2
    q2 = float(np.einsum("ai,a,i,i->", nprime, wx, wq, q**2))
    delta_p = 0.5 * q2 + 0.5 * p**2 - p**2
    # j'_q reduced: pdot = (1/sqrt2) * integral of 2 Im(phi* d_q phi)
    grad = np.zeros_like(orb.phi)
    grad[:, 1:-1] = (orb.phi[:, 2:] - orb.phi[:, :-2]) / (2 * qgrid.dx)
    jq = 2.0 * np.imag(np.conj(orb.phi) * grad)
    pdot = float(np.einsum("ai,a,i->", jq, wx, wq)) / SQRT2
    flin = model.lam * (model.omega / SQRT2) * (nprime @ (wq * q))
    return {"norm": orb.norm(), "n_x": n_x, "n_prime": nprime, "dipole_R": R,
            "p": p, "pdot": pdot, "delta_p": delta_p, "flin_dressed": flin}


def dressed_total_energy(orb: DressedOrbital, model: ModelSystem,
                         approx: MxcApproximation, h0: HamiltonianAction) -> float:
    """2 <phi|T + v'|phi> plus the interaction functional whose density
    derivative is the Mxc potential (conserved for static external fields)."""
    obs = dressed_observables(orb, model)
    cell = uniform_cell(orb.grids)
    e_one = 2.0 * float(np.vdot(orb.phi, h0.apply(orb.phi)).real) * cell
    if not approx.has_mxc:
        return e_one
    xaxis = orb.grids.axes[0]
    n_x, R, p = obs["n_x"], obs["dipole_R"], obs["p"]
    om, lam = model.omega, model.lam
    e_int = 0.0
    if model.kind == HELIUM_1D and model.flags.include_w:
        vh = hartree_exchange(model, xaxis, n_x)  # = 1/2 integral n w
        e_int += 0.5 * float((vh * n_x) @ xaxis.weights)
    if model.flags.include_quadratic:
        e_int += 0.25 * (lam * R) ** 2
    if approx.has_mx_bilinear:
        e_int -= 0.5 * om * lam * p * R
    return e_one + e_int


def make_dressed_hamiltonian(model: ModelSystem, zgrids: ProductGrid,
                             approx: MxcApproximation, t: float = 0.0) -> HamiltonianAction:
    """One-body action with v' only; the Mxc part is added via set_potential."""
    xaxis, qgrid = zgrids.axes
    kin_x, _, _ = _electron_axis(model, xaxis)
    v1 = dressed_external_potential(model, zgrids, approx, t)
    return HamiltonianAction(zgrids, (kin_x, KineticAxis(qgrid)), v1, model)


def dressed_grids(model: ModelSystem, n_x: int = 201, n_q: int = 64) -> ProductGrid:
    if model.kind == TWO_SITE:
        return ProductGrid((model.site_basis(), model.mode_grid(n_q)))
    return ProductGrid((model.x_grid(n_x), model.mode_grid(n_q)))


def initial_dressed_orbital(model: ModelSystem, zgrids: ProductGrid,
                            electron_orbital: np.ndarray,
                            vacuum: str = "discrete") -> DressedOrbital:
    """Product state: electron orbital times the q-space vacuum (the p, p2
    double vacuum factorizes into q1, q2 Gaussians). `vacuum` picks the grid
    oscillator ground state (default, exactly stationary) or the sampled
    continuum Gaussian."""
    qgrid = zgrids.axes[1]
    vac = discrete_vacuum(qgrid, model.omega) if vacuum == "discrete" \
        else vacuum_gaussian(qgrid, model.omega)
    phi = np.multiply.outer(electron_orbital, vac)
    orb = DressedOrbital(zgrids, phi.astype(complex))
    return orb.normalize()


class _ScfDriver:
    """Shared self-consistency plumbing: rebuild the potential from the
    current orbital and report the total energy."""

    def __init__(self, model, zgrids, approx, t=0.0):
        self.model = model
        self.zgrids = zgrids
        self.approx = approx
        self.h = make_dressed_hamiltonian(model, zgrids, approx, t)
        self.v_one = self.h.potential.copy()
        # separate action with the bare one-body potential, for energies
        self.h_one = HamiltonianAction(zgrids, self.h.axes, self.v_one, model)

    def total_energy(self, orb: DressedOrbital) -> float:
        return dressed_total_energy(orb, self.model, self.approx, self.h_one)

    def refresh(self, orb: DressedOrbital, mix_density: np.ndarray | None = None,
                alpha: float = 1.0):
        obs = dressed_observables(orb, self.model)
        n_x = obs["n_x"]
        if mix_density is not None:
            n_x = alpha * n_x + (1 - alpha) * mix_density
        vmxc = mx_potential(self.model, self.zgrids, n_x, obs["dipole_R"], obs["p"],
                            self.approx)
        self.h.set_potential(self.v_one + vmxc)
        return obs, n_x


def dressed_ground_state(model: ModelSystem, approx: MxcApproximation,
                         zgrids: ProductGrid | None = None, tol: float = 1e-9,
                         dtau: float = 0.01, max_iter: int = 100_000,
                         n_x: int = 201, n_q: int = 64) -> tuple[float, DressedOrbital]:
    """Self-consistent dressed ground state by imaginary time with the
    potential rebuilt from the evolving density; plain iteration first, linear
    density mixing (alpha = 0.5) after detected non-monotone convergence."""
    zgrids = zgrids or dressed_grids(model, n_x, n_q)
    xaxis, qgrid = zgrids.axes
    drv = _ScfDriver(model, zgrids, approx)

    # seed: bare electron guess times the photon vacuum
    if model.kind == TWO_SITE:
        seed = np.full(xaxis.n, 1.0 / np.sqrt(xaxis.n))
    else:
        seed = np.exp(-0.5 * xaxis.points**2)
        seed[0] = seed[-1] = 0.0
    orb = initial_dressed_orbital(model, zgrids, seed)

    stepper = ImaginaryStrangStepper(drv.h, dtau)
    e_prev = np.inf
    n_prev = None
    alpha = 1.0
    mixing = False
    rising = 0
    check = 20
    for it in range(max_iter):
        _, n_used = drv.refresh(orb, n_prev if mixing else None, alpha)
        orb.phi = stepper.step(orb.phi)
        orb.normalize()
        n_prev = n_used
        if (it + 1) % check == 0:
            e = drv.total_energy(orb)
            n_now = dressed_observables(orb, model)["n_x"]
            de = abs(e - e_prev) / check
            dn = np.max(np.abs(n_now - n_prev)) if n_prev is not None else np.inf
            if e > e_prev + 1e-13:
                rising += 1
                if rising * check > 10_000 and not mixing:
                    mixing, alpha = True, 0.5
            e_prev = e
            if de < tol * 1e-1 and dn < tol:
                break
    else:
        raise RuntimeError(f"no-convergence: SCF did not settle in {max_iter} steps")

    orb = _scf_polish(drv, orb, tol)
    return drv.total_energy(orb), orb


def _scf_polish(drv: _ScfDriver, orb: DressedOrbital, tol: float,
                max_rounds: int = 50_000) -> DressedOrbital:
    """Power-iteration polish with the potential rebuilt every step; fixed
    point is the exact discrete self-consistent orbital."""
    cell = uniform_cell(orb.grids)
    for it in range(max_rounds):
        drv.refresh(orb)
        hpsi = drv.h.apply(orb.phi)
        e = float(np.vdot(orb.phi, hpsi).real) * cell
        r = hpsi - e * orb.phi
        res = np.sqrt(float(np.vdot(r, r).real) * cell)
        if res < tol:
            break
        _, hi = drv.h.gershgorin_bounds()
        orb.phi = orb.phi - (1.8 / max(hi - e, 1e-12)) * r
        orb.normalize()
    return orb


def propagate_dressed(orb: DressedOrbital, model: ModelSystem,
                      approx: MxcApproximation, dt: float, steps: int,
                      recorder: Recorder | None = None, scheme: str = "strang",
                      t0: float = 0.0):
    """Self-consistent propagation: one predictor half-step builds the
    midpoint potential, then a unitary full step (midpoint rule)."""
    recorder = recorder or Recorder()
    drv = _ScfDriver(model, zgrids=orb.grids, approx=approx, t=t0)
    half = make_stepper(scheme, drv.h, 0.5 * dt)
    full = make_stepper(scheme, drv.h, dt)
    builder = SeriesBuilder()

    def sample(i):
        obs = dressed_observables(orb, model)
        builder.add_row(t0 + i * dt, norm=obs["norm"],
                        energy=drv.total_energy(orb),
                        dipole_R=obs["dipole_R"], p=obs["p"], pdot=obs["pdot"],
                        delta_p=obs["delta_p"])
        if recorder.densities:
            builder.add_density("n_x", obs["n_x"])
            builder.add_density("n_prime", obs["n_prime"])
        if recorder.currents:
            builder.add_density("j_z", _dressed_current(orb))

    drv.refresh(orb)
    sample(0)
    mid = orb.copy()
    for i in range(1, steps + 1):
        drv.refresh(orb)  # potential at t
        mid.phi = half.step(orb.phi)
        drv.refresh(mid)  # midpoint potential
        orb.phi = full.step(orb.phi)
        if i % recorder.stride == 0 or i == steps:
            _check_finite(orb.phi, f"dressed propagation step {i}")
            drv.refresh(orb)
            sample(i)
    return builder.build(meta={"solver": "dressed-ks", "variant": approx.name,
                               "scheme": scheme, "dt": dt})


def _dressed_current(orb: DressedOrbital) -> np.ndarray:
    """Current in the dressed plane, stacked (j_x, j_q), x-major."""
    xaxis, qgrid = orb.grids.axes
    phi = orb.phi
    jx = np.zeros(phi.shape)
    if isinstance(xaxis, Grid1D):
        gx = np.zeros_like(phi)
        gx[1:-1, :] = (phi[2:, :] - phi[:-2, :]) / (2 * xaxis.dx)
        jx = 2.0 * np.imag(np.conj(phi) * gx)
    gq = np.zeros_like(phi)
    gq[:, 1:-1] = (phi[:, 2:] - phi[:, :-2]) / (2 * qgrid.dx)
    jq = 2.0 * np.imag(np.conj(phi) * gq)
    return np.stack([jx, jq])


def electron_orbital_ground(model: ModelSystem, xaxis, tol: float = 1e-10,
                            lam_off: bool = True) -> tuple[float, np.ndarray]:
    """Bare doubly-occupied electron orbital at the exact-exchange level
    (lambda = 0 Kohn-Sham ground state used to seed the cavity runs).

    Returns (orbital energy eigenvalue, normalized orbital).
    """
    kin, dip, v = _electron_axis(model, xaxis)
    grids = ProductGrid((xaxis,))
    h = HamiltonianAction(grids, (kin,), v.copy(), model)
    if model.kind == TWO_SITE:
        e, phi = _linear_ground_state(h, tol=tol)
        return e, phi
    w = xaxis.weights
    phi = np.exp(-0.5 * xaxis.points**2)
    phi[0] = phi[-1] = 0.0
    phi = phi / np.sqrt((np.abs(phi) ** 2 @ w))
    e = np.inf
    for _ in range(500):
        n_x = 2.0 * np.abs(phi) ** 2
        h.set_potential(v + hartree_exchange(model, xaxis, n_x))
        e_new, phi_new = _linear_ground_state(h, tol=max(tol, 1e-11), v0=phi)
        dn = np.max(np.abs(2.0 * np.abs(phi_new) ** 2 - n_x))
        converged = dn < tol and abs(e_new - e) < tol
        e = e_new
        phi = phi_new / np.sqrt((np.abs(phi_new) ** 2 @ w))
        if converged:
            break
    return e, phi
