"""Exact solver: observables, the two worked initial states, and the
propagation examples with their independent oracles."""

import numpy as np
import pytest

from cqedlab.exact import (exact_ground_state, exact_observables, helium_initial_state,
                           propagate_exact, two_site_initial_state)
from cqedlab.grids import ProductGrid, photon_grid
from cqedlab.hamiltonian import build_exact_hamiltonian, two_site_config_basis
from cqedlab.models import make_helium_model, make_two_site_model, vacuum_gaussian
from cqedlab.series import Recorder
from cqedlab.states import ELECTRON_PAIR, HELIUM_GRID, TWO_SITE_REP, ExactState


def test_two_site_initial_state_amplitudes():
    model = make_two_site_model(0.5, 1.0, 0.01)
    pg = model.mode_grid(48)
    st = two_site_initial_state(model, pg)
    assert st.norm() == pytest.approx(1.0, abs=1e-12)
    occ = np.abs(st.psi) ** 2 @ pg.weights
    assert occ == pytest.approx([1 / 16, 6 / 16, 9 / 16], abs=1e-10)
    obs = exact_observables(st)
    assert obs["dipole_R"] == pytest.approx(0.5, abs=1e-10)


def test_vacuum_fluctuation_quoted_value():
    # Delta p at lambda=0, omega=0.58037 equals 1/(2 omega) = 0.8615 by quadrature
    omega = 0.58037
    model = make_helium_model(omega, 0.0)
    xg = model.x_grid(31)
    pg = model.mode_grid(64)
    _, s_el = exact_ground_state(model, ProductGrid((xg, xg)), ELECTRON_PAIR, tol=1e-8)
    st = helium_initial_state(s_el, pg, omega, vacuum="gaussian")
    obs = exact_observables(st)
    assert obs["delta_p"] == pytest.approx(1.0 / (2 * omega), abs=5e-5)
    assert f"{obs['delta_p']:.4f}" == "0.8615"
    # uncoupled tensor product: dipole vanishes by parity
    assert abs(obs["dipole_R"]) < 1e-10
    assert abs(obs["p"]) < 1e-12


def test_supp_v_exact_fluctuation_change_small_grid():
    """with w, no quadratic terms, lambda=0.1: Delta p change ~ 0.0183
    (coarse-grid rendition of the quoted number; the acceptance suite runs
    the 4D dressed-pair route at higher resolution)."""
    omega, lam = 0.58037, 0.1
    from cqedlab.models import InteractionFlags
    flags = InteractionFlags(include_w=True, include_quadratic=False)
    changes = {}
    for lam_val in (0.0, lam):
        model = make_helium_model(omega, lam_val, flags)
        xg = model.x_grid(41)
        pg = model.mode_grid(32)
        grids = ProductGrid((xg, xg, pg))
        _, st = exact_ground_state(model, grids, HELIUM_GRID, tol=1e-8)
        changes[lam_val] = exact_observables(st)["delta_p"]
    assert changes[lam] - changes[0.0] == pytest.approx(0.0183, abs=2e-3)


def test_two_site_dipole_matches_dense_expm_oracle():
    """Propagated d(t) against the dense matrix exponential of the same grid
    Hamiltonian, independently assembled (short window; the acceptance suite
    runs t in [0,100])."""
    import scipy.sparse as sp

    model = make_two_site_model(0.5, 1.0, 0.01)
    pg = model.mode_grid(48)
    grids = ProductGrid((two_site_config_basis(), pg))
    h = build_exact_hamiltonian(model, grids, TWO_SITE_REP)
    state = two_site_initial_state(model, pg)
    psi0 = state.psi.copy()
    dt, steps = 0.01, 1000
    series = propagate_exact(state, h, dt, steps, Recorder(stride=50, densities=False),
                             scheme="krylov")

    # oracle: independent kron assembly + eigendecomposition propagation
    hop = -np.sqrt(2.0) * model.hopping
    t3 = np.array([[0, hop, 0], [hop, 0, hop], [0, hop, 0]])
    lap = sp.diags([np.ones(pg.n - 1), -2 * np.ones(pg.n), np.ones(pg.n - 1)],
                   [-1, 0, 1]) / pg.dx**2
    di = np.array([-1.0, 0.0, 1.0])
    blocks = []
    for i in range(3):
        pot = 0.5 * (model.omega * pg.points - model.lam * di[i]) ** 2
        blocks.append((-0.5 * lap + sp.diags(pot)).toarray())
    dense = np.kron(t3, np.eye(pg.n))
    for i in range(3):
        dense[i * pg.n:(i + 1) * pg.n, i * pg.n:(i + 1) * pg.n] += blocks[i]
    evals, evecs = np.linalg.eigh(dense)
    c0 = evecs.T @ psi0.ravel()
    dip_diag = np.repeat(di, pg.n)
    for k, t in enumerate(series.t):
        psi_t = evecs @ (np.exp(-1j * evals * t) * c0)
        d_or = float((np.abs(psi_t) ** 2 * dip_diag).sum() / (np.abs(psi_t) ** 2).sum())
        assert abs(series.columns["dipole_R"][k] - d_or) < 1e-8


def test_two_site_against_fock_basis_oracle():
    """Physics-level check against a photon-number-basis oracle; tolerance is
    set by the p-grid discretization of the oscillator ladder."""
    model = make_two_site_model(0.5, 1.0, 0.01)
    pg = model.mode_grid(96)
    grids = ProductGrid((two_site_config_basis(), pg))
    h = build_exact_hamiltonian(model, grids, TWO_SITE_REP)
    state = two_site_initial_state(model, pg)
    dt, steps = 0.01, 2000
    series = propagate_exact(state, h, dt, steps, Recorder(stride=100, densities=False),
                             scheme="krylov")

    n_ph = 48
    om, lam, thop = model.omega, model.lam, model.hopping
    a = np.diag(np.sqrt(np.arange(1, n_ph)), 1)
    num = np.diag(np.arange(n_ph))
    x_op = (a + a.T) / np.sqrt(2 * om)
    t3 = -np.sqrt(2.0) * thop * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    di = np.diag([-1.0, 0.0, 1.0])
    hf = (np.kron(t3, np.eye(n_ph)) + np.kron(np.eye(3), om * (num + 0.5 * np.eye(n_ph)))
          - om * lam * np.kron(di, x_op) + 0.5 * lam**2 * np.kron(di @ di, np.eye(n_ph)))
    evals, evecs = np.linalg.eigh(hf)
    # initial state in the Fock basis: vacuum photon column
    elec = np.array([0.25, np.sqrt(6) / 4, 0.75])
    psi0 = np.kron(elec, np.eye(n_ph)[:, 0])
    c0 = evecs.T @ psi0
    dip_diag = np.repeat(np.diag(di), n_ph)
    errs = []
    for k, t in enumerate(series.t):
        psi_t = evecs @ (np.exp(-1j * evals * t) * c0)
        d_or = float((np.abs(psi_t) ** 2 * dip_diag).sum())
        errs.append(abs(series.columns["dipole_R"][k] - d_or))
    assert max(errs) < 2e-3  # limited by the p-grid representation


def test_helium_symmetric_run_p_stays_zero():
    omega, lam = 0.58037, 0.1
    model = make_helium_model(omega, lam)
    xg = model.x_grid(41)
    pg = model.mode_grid(24)
    _, s_el = exact_ground_state(model.with_lambda(0.0), ProductGrid((xg, xg)),
                                 ELECTRON_PAIR, tol=1e-9)
    st = helium_initial_state(s_el, pg, omega)
    h = build_exact_hamiltonian(model, st.grids, HELIUM_GRID)
    series = propagate_exact(st, h, 0.02, 500, Recorder(stride=50, densities=False),
                             scheme="strang")
    assert np.max(np.abs(series.columns["p"])) < 1e-10
    assert np.max(np.abs(series.columns["norm"] - 1)) < 1e-9


def test_exchange_symmetry_preserved_under_propagation():
    model = make_two_site_model(0.5, 1.0, 0.02)
    pg = model.mode_grid(32)
    st = two_site_initial_state(model, pg)
    h = build_exact_hamiltonian(model, st.grids, TWO_SITE_REP)
    series = propagate_exact(st, h, 0.02, 200, Recorder(stride=100, densities=False),
                             scheme="krylov")
    # two-site singlet basis is symmetric by construction; check helium briefly
    model2 = make_helium_model(0.6, 0.1)
    xg = model2.x_grid(25)
    pg2 = model2.mode_grid(16)
    _, s_el = exact_ground_state(model2.with_lambda(0.0), ProductGrid((xg, xg)),
                                 ELECTRON_PAIR, tol=1e-8)
    st2 = helium_initial_state(s_el, pg2, model2.omega)
    h2 = build_exact_hamiltonian(model2, st2.grids, HELIUM_GRID)
    propagate_exact(st2, h2, 0.02, 300, Recorder(stride=300, densities=False), "strang")
    from cqedlab.states import exchange_defect
    assert exchange_defect(HELIUM_GRID, st2.psi) < 1e-12
