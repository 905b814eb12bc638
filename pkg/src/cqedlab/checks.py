"""Fast self-contained invariant checks behind the `check` CLI command:
transform orthogonality, embedding/reduction identities, the potential
identities among the Mx variants, and residual convergence orders.
"""

from __future__ import annotations

import numpy as np

from .diagnostics import maxwell_residual
from .dressed import (MxcApproximation, dressed_external_potential, mx_potential)
from .exact import exact_ground_state, exact_observables, helium_initial_state, \
    propagate_exact, two_site_initial_state
from .grids import ProductGrid, aligned_photon_grids, make_uniform_grid, photon_grid
from .hamiltonian import build_exact_hamiltonian, two_site_config_basis
from .models import make_helium_model, make_two_site_model, vacuum_gaussian
from .runconfig import RunConfig
from .series import Recorder
from .standard import mean_field_coupling_dressed
from .states import ELECTRON_PAIR, TWO_SITE_REP
from .transform import dressing_matrix, embed_dressed, reduce_dressed_density


def check_transform_orthogonality() -> tuple[bool, str]:
    worst = 0.0
    for n in range(2, 65):
        m = dressing_matrix(n).matrix
        worst = max(worst, float(np.max(np.abs(m @ m.T - np.eye(n)))))
    return worst < 1e-12, f"max ||MM^T - I||_inf over N<=64: {worst:.2e}"


def check_embedding_identities() -> tuple[bool, str]:
    omega, lam = 0.58037, 0.1
    model = make_helium_model(omega, lam)
    xg = model.x_grid(31)
    pg, qg = aligned_photon_grids(omega, 28)
    grids = ProductGrid((xg, xg, pg))
    _, st = exact_ground_state(model, grids, "helium-grid", tol=1e-8)
    emb = embed_dressed(st, omega, (qg, qg))
    red = reduce_dressed_density(emb)
    obs = exact_observables(st)
    err_n = float(np.max(np.abs(red["n_x"] - obs["n_x"])))
    err_p = abs(red["p"] - obs["p"])
    err_dp = abs(red["delta_p"] - obs["delta_p"])
    ok = err_n < 1e-6 and err_p < 1e-8 and err_dp < 1e-8
    return ok, f"n: {err_n:.2e} (<1e-6), p: {err_p:.2e} (<1e-8), delta_p: {err_dp:.2e} (<1e-8)"


def check_potential_identities() -> tuple[bool, str]:
    model = make_helium_model(0.58037, 0.1)
    zg = ProductGrid((model.x_grid(41), model.mode_grid(24)))
    rng = np.random.default_rng(0)
    n_x = np.abs(rng.standard_normal(41)) + 0.1
    n_x[0] = n_x[-1] = 0.0
    R, p = 0.37, -0.21
    v_mx = mx_potential(model, zg, n_x, R, p, MxcApproximation("mx"))
    v_smx = mx_potential(model, zg, n_x, R, p, MxcApproximation("smx"))
    lam, om = model.lam, model.omega
    dip = zg.axes[0].points
    q = zg.axes[1].points
    bilin = (-0.5 * om * p * lam * dip[:, None]
             - (om / (2 * np.sqrt(2.0))) * q[None, :] * lam * R)
    err1 = float(np.max(np.abs(v_smx - (v_mx - bilin))))
    vbar = dressed_external_potential(model, zg, MxcApproximation("smx"))
    vone = dressed_external_potential(model, zg, MxcApproximation("mx"))
    err2 = float(np.max(np.abs((vbar - vone) - (-(2 - 1) * (om / np.sqrt(2.0)) * lam
                                                * dip[:, None] * q[None, :]))))
    # two-site: non-Hartree Mx equals half the standard mean-field term
    m2 = make_two_site_model(0.5, 1.0, 0.01)
    zg2 = ProductGrid((m2.site_basis(), m2.mode_grid(16)))
    v_mx2 = mx_potential(m2, zg2, np.array([0.5, 1.5]), 0.5, 0.1, MxcApproximation("mx"))
    mf = mean_field_coupling_dressed(m2, zg2.axes[0], zg2.axes[1], 0.5, 0.1)
    err3 = float(np.max(np.abs(v_mx2 - 0.5 * mf)))
    ok = err1 < 1e-14 and err2 < 1e-13 and err3 < 1e-14
    return ok, f"sMx identity: {err1:.2e}, scaled v': {err2:.2e}, half-MF: {err3:.2e}"


def check_maxwell_residual_order() -> tuple[bool, str]:
    # halve the sampling interval and the photon-grid spacing together: the
    # residual carries an O(dp^2) floor from the grid Maxwell relation
    model = make_two_site_model(0.5, 1.0, 0.05)
    norms = []
    for dt, n_p in ((0.04, 33), (0.02, 65)):
        pg = model.mode_grid(n_p)
        grids = ProductGrid((two_site_config_basis(), pg))
        h = build_exact_hamiltonian(model, grids, TWO_SITE_REP)
        st = two_site_initial_state(model, pg)
        series = propagate_exact(st, h, dt, int(8.0 / dt), Recorder(stride=1, densities=False),
                                 scheme="krylov")
        res = maxwell_residual(series.t, series.columns["p"], series.columns["dipole_R"], model)
        norms.append(np.nanmax(np.abs(res)))
    order = np.log2(norms[0] / norms[1])
    return order > 1.9, f"maxwell residual order {order:.2f} (>1.9)"


def all_checks() -> list[tuple[str, bool, str]]:
    out = []
    for name, fn in (("transform-orthogonality", check_transform_orthogonality),
                     ("embedding-identities", check_embedding_identities),
                     ("potential-identities", check_potential_identities),
                     ("maxwell-residual-order", check_maxwell_residual_order)):
        ok, detail = fn()
        out.append((name, ok, detail))
    return out
