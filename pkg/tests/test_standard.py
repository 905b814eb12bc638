"""Standard cavity-KS: potential variants, the analytic Maxwell stepper, and
the claims that separate mean-field from Mx on the helium example."""

import numpy as np
import pytest

from cqedlab.dressed import MxcApproximation, dressed_grids, dressed_ground_state, \
    dressed_observables, electron_orbital_ground, initial_dressed_orbital, propagate_dressed
from cqedlab.exact import exact_ground_state, helium_initial_state, propagate_exact, \
    two_site_initial_state
from cqedlab.grids import ProductGrid
from cqedlab.hamiltonian import build_exact_hamiltonian, two_site_config_basis
from cqedlab.models import InteractionFlags, make_helium_model, make_two_site_model
from cqedlab.series import Recorder
from cqedlab.standard import (initial_standard_state, maxwell_step, propagate_standard,
                              standard_observables, standard_potential)
from cqedlab.states import ELECTRON_PAIR, TWO_SITE_REP

OMEGA1 = 0.58037


def test_standard_potential_variants():
    model = make_helium_model(OMEGA1, 0.1)
    xg = model.x_grid(61)
    n_x = np.exp(-xg.points**2)
    from cqedlab.dressed import hartree_exchange
    from cqedlab.models import soft_coulomb_v
    vhx = hartree_exchange(model, xg, n_x)
    v = soft_coulomb_v(xg.points)
    x = xg.points
    lam = model.lam
    got_mx = standard_potential(model, xg, n_x, R=0.0, p=0.0, variant="mx")
    assert np.allclose(got_mx, v + vhx + 0.5 * lam**2 * x**2, atol=1e-14)
    got_mf = standard_potential(model, xg, n_x, R=0.0, p=0.0, variant="mean-field")
    assert np.allclose(got_mf, v + vhx, atol=1e-14)
    # lambda = 0: both variants reduce to v + v_Hx
    m0 = model.with_lambda(0.0)
    for variant in ("mx", "mean-field"):
        got = standard_potential(m0, xg, n_x, R=0.7, p=0.3, variant=variant)
        assert np.allclose(got, v + vhx, atol=1e-14)


def test_maxwell_step_free_oscillator():
    model = make_helium_model(1.3, 0.0)
    dt = 0.05
    p, pdot = 1.0, 0.0
    n = int(round(2 * np.pi / model.omega / dt))
    for k in range(n):
        p, pdot = maxwell_step(p, pdot, model, dt, 0.0, 0.0)
    # exact rotation: error limited only by the period not being a grid multiple
    t = n * dt
    assert p == pytest.approx(np.cos(model.omega * t), abs=1e-10)
    assert pdot == pytest.approx(-model.omega * np.sin(model.omega * t), abs=1e-10)


def test_maxwell_step_relaxes_to_shifted_fixed_point():
    model = make_helium_model(0.9, 0.2)
    rbar = 0.8
    target = model.lam * rbar / model.omega
    dt = 0.02
    p, pdot = 0.0, 0.0
    ps = []
    for _ in range(int(40 / dt)):
        p, pdot = maxwell_step(p, pdot, model, dt, rbar, rbar)
        ps.append(p)
    ps = np.array(ps)
    # from rest the solution is target * (1 - cos(omega t))
    T = 40.0
    windowed_mean = target * (1 - np.sin(model.omega * T) / (model.omega * T))
    assert np.mean(ps) == pytest.approx(windowed_mean, rel=1e-3)
    assert np.max(ps) > target > np.min(ps)  # oscillates about the fixed point
    assert np.max(ps) == pytest.approx(2 * target, rel=1e-3)


def test_two_site_standard_p_tracks_exact_at_early_times():
    model = make_two_site_model(0.5, 1.0, 0.01)
    pg = model.mode_grid(48)
    st = two_site_initial_state(model, pg)
    h = build_exact_hamiltonian(model, st.grids, TWO_SITE_REP)
    rec = Recorder(stride=10, densities=False, fluctuations=False)
    ex = propagate_exact(st, h, 0.01, 1000, rec, scheme="krylov")
    ks = initial_standard_state(model, model.site_basis(), np.array([0.5, np.sqrt(3) / 2]),
                                pg, fluctuations=False)
    sm = propagate_standard(ks, model, "mx", 0.01, 1000, rec)
    # early times (t <= 5): correlation has not built up yet
    early = ex.t <= 5.0
    diff = np.abs(ex.columns["p"][early] - sm.columns["p"][early])
    assert np.max(np.abs(ex.columns["p"][early])) > 2e-3  # non-trivial comparison
    assert np.max(diff) < 1e-3
    # and the mean-field deviation grows later on
    assert np.max(np.abs(ex.columns["p"] - sm.columns["p"])) > np.max(diff)


def test_photon_orbital_consistent_with_ode():
    # agreement is limited by the O(dp^2) frequency offset of the FD
    # oscillator relative to the analytic rotation; ~0.5% here
    model = make_two_site_model(0.5, 1.0, 0.05)
    pg = model.mode_grid(128)
    ks = initial_standard_state(model, model.site_basis(), np.array([0.5, np.sqrt(3) / 2]),
                                pg, fluctuations=True)
    series = propagate_standard(ks, model, "mx", 0.01, 800,
                                Recorder(stride=100, densities=False, fluctuations=True))
    obs = standard_observables(ks, model)
    scale = np.max(np.abs(series.columns["p"]))
    assert abs(obs["p_orbital"] - ks.p) < 0.01 * scale


def test_lambda_zero_standard_equals_dressed_densities():
    """Factorization invariant: with the cavity decoupled, the standard and
    dressed propagators produce the same electron densities."""
    model = make_helium_model(OMEGA1, 0.0)
    zg = dressed_grids(model, n_x=61, n_q=24)
    xg = zg.axes[0]
    _, phi0 = electron_orbital_ground(model, xg)
    # slightly perturbed start so real dynamics happens
    kick = np.exp(0.3j * xg.points)
    rec = Recorder(stride=50, densities=True, fluctuations=False)
    orb = initial_dressed_orbital(model, zg, phi0 * kick)
    # splitting factorizes exactly over the decoupled (x, q) sectors; the
    # Cayley form would add O(dt^3) cross-phases between the sectors
    dr = propagate_dressed(orb, model, MxcApproximation("mx"), 0.01, 400, rec,
                           scheme="strang")
    ks = initial_standard_state(model, xg, phi0 * kick, fluctuations=False)
    sm = propagate_standard(ks, model, "mx", 0.01, 400, rec, scheme="strang")
    assert np.max(np.abs(dr.densities["n_x"] - sm.densities["n_x"])) < 1e-10
    assert np.max(np.abs(dr.columns["dipole_R"] - sm.columns["dipole_R"])) < 1e-10


def test_helium_mean_field_density_frozen():
    # standard mean-field yields no density change: the field stays dark (R=0)
    model = make_helium_model(OMEGA1, 0.1)
    xg = model.x_grid(61)
    _, phi0 = electron_orbital_ground(model.with_lambda(0.0), xg)
    ks = initial_standard_state(model, xg, phi0, fluctuations=False)
    series = propagate_standard(ks, model, "mean-field", 0.02, 500,
                                Recorder(stride=100, densities=True, fluctuations=False))
    dn = np.abs(series.densities["n_x"] - series.densities["n_x"][0]).max()
    assert dn < 1e-10
    assert np.abs(series.columns["p"]).max() < 1e-12


def test_helium_standard_mx_fluctuations_constant_density_moves():
    model = make_helium_model(OMEGA1, 0.1)
    xg = model.x_grid(61)
    pg = model.mode_grid(48)
    _, phi0 = electron_orbital_ground(model.with_lambda(0.0), xg)
    ks = initial_standard_state(model, xg, phi0, pg, fluctuations=True)
    series = propagate_standard(ks, model, "mx", 0.02, 500,
                                Recorder(stride=50, densities=True, fluctuations=True))
    dp = series.columns["delta_p"]
    assert np.max(np.abs(dp - dp[0])) < 1e-6  # constant field fluctuations
    dn = np.abs(series.densities["n_x"] - series.densities["n_x"][0]).max()
    assert dn > 1e-4  # the quadratic dipole term drives a visible breathing
