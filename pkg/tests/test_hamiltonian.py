"""Hamiltonian actions: hermiticity, independently assembled spectra oracles,
and the separability/equivalence structure across representations."""

import numpy as np
import pytest
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from cqedlab.grids import HARD_WALL, ProductGrid, make_uniform_grid, photon_grid
from cqedlab.hamiltonian import (build_exact_hamiltonian, two_site_config_basis,
                                 two_site_hopping_matrix)
from cqedlab.models import (InteractionFlags, make_helium_model, make_two_site_model,
                            soft_coulomb_v)
from cqedlab.states import DRESSED_PAIR, ELECTRON_PAIR, HELIUM_GRID, TWO_SITE_REP


def oracle_lap1d(n, dx):
    """Independent FD Laplacian assembly for the test-side matrices."""
    return sp.diags([np.ones(n - 1), -2 * np.ones(n), np.ones(n - 1)], [-1, 0, 1]) / dx**2


def two_site_grids(model, n_p=48):
    return ProductGrid((two_site_config_basis(), model.mode_grid(n_p)))


@pytest.mark.parametrize("case", ["two-site", "helium-grid", "dressed-pair"])
def test_hermitian_on_random_states(case):
    rng = np.random.default_rng(5)
    if case == "two-site":
        model = make_two_site_model(0.5, 1.0, 0.01)
        grids = two_site_grids(model, 32)
        h = build_exact_hamiltonian(model, grids, TWO_SITE_REP)
    elif case == "helium-grid":
        model = make_helium_model(0.58037, 0.1)
        xg = model.x_grid(31)
        grids = ProductGrid((xg, xg, model.mode_grid(16)))
        h = build_exact_hamiltonian(model, grids, HELIUM_GRID)
    else:
        model = make_helium_model(0.58037, 0.1)
        xg = model.x_grid(15)
        qg = model.mode_grid(12)
        grids = ProductGrid((xg, qg, xg, qg))
        h = build_exact_hamiltonian(model, grids, DRESSED_PAIR)
    for _ in range(4):
        f = rng.standard_normal(grids.shape) + 1j * rng.standard_normal(grids.shape)
        g = rng.standard_normal(grids.shape) + 1j * rng.standard_normal(grids.shape)
        h._pin_walls(f)
        h._pin_walls(g)
        lhs = np.vdot(f, h.apply(g))
        rhs = np.vdot(h.apply(f), g)
        assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))


def test_two_site_electronic_spectrum_against_dense_oracle():
    # lambda=0: electronic block spectrum {-2t, 0, +2t}; optically active gap 2t
    t = 0.5
    hop = two_site_hopping_matrix(t)
    vals, vecs = np.linalg.eigh(hop)
    assert np.allclose(vals, [-2 * t, 0.0, 2 * t], atol=1e-14)
    dip = np.diag([-1.0, 0.0, 1.0])
    # ground -> middle state is dipole-coupled
    assert abs(vecs[:, 0] @ dip @ vecs[:, 1]) > 0.5
    assert vals[1] - vals[0] == pytest.approx(2 * t, abs=1e-14)


def test_two_site_full_matches_independent_sparse_assembly():
    model = make_two_site_model(0.5, 1.0, 0.01)
    grids = two_site_grids(model, 40)
    h = build_exact_hamiltonian(model, grids, TWO_SITE_REP)
    pg = grids.axes[1]
    p = pg.points
    dip = np.array([-1.0, 0.0, 1.0])
    hp = -0.5 * oracle_lap1d(pg.n, pg.dx)
    blocks = []
    for i in range(3):
        pot = 0.5 * (model.omega * p - model.lam * dip[i]) ** 2
        blocks.append(hp + sp.diags(pot))
    oracle = sp.bmat([
        [blocks[0], two_site_hopping_matrix(model.hopping)[0, 1] * sp.identity(pg.n), None],
        [two_site_hopping_matrix(model.hopping)[1, 0] * sp.identity(pg.n), blocks[1],
         two_site_hopping_matrix(model.hopping)[1, 2] * sp.identity(pg.n)],
        [None, two_site_hopping_matrix(model.hopping)[2, 1] * sp.identity(pg.n), blocks[2]],
    ]).tocsr()
    rng = np.random.default_rng(1)
    f = rng.standard_normal(grids.shape) + 1j * rng.standard_normal(grids.shape)
    assert np.allclose(h.apply(f).ravel(), oracle @ f.ravel(), atol=1e-12)
    # and the packaged sparse assembly agrees with the apply path
    assert np.allclose(h.sparse_active() @ f.ravel(), h.apply(f).ravel(), atol=1e-12)


def test_helium_lambda_zero_separates():
    # H = H_elec + photon oscillator: E0(total) = E0(elec) + omega/2 (discrete)
    model = make_helium_model(0.6, 0.0)
    xg = model.x_grid(41)
    pg = model.mode_grid(32)
    grids3 = ProductGrid((xg, xg, pg))
    h3 = build_exact_hamiltonian(model, grids3, HELIUM_GRID)

    m = xg.n_active
    lx = oracle_lap1d(m, xg.dx)
    xi = xg.points[1:-1]
    v = soft_coulomb_v(xi)
    w = 1.0 / np.sqrt((xi[:, None] - xi[None, :]) ** 2 + 1.0)
    hel = (-0.5 * (sp.kron(lx, sp.identity(m)) + sp.kron(sp.identity(m), lx))
           + sp.diags((v[:, None] + v[None, :] + w).ravel()))
    e_el = spla.eigsh(hel.tocsr(), k=1, which="SA", tol=1e-12)[0][0]
    hp = (-0.5 * oracle_lap1d(pg.n, pg.dx) + sp.diags(0.5 * model.omega**2 * pg.points**2))
    e_ph = spla.eigsh(hp.tocsr(), k=1, which="SA", tol=1e-13)[0][0]

    e_tot = spla.eigsh(h3.sparse_active(), k=1, which="SA", tol=1e-11)[0][0]
    assert e_tot == pytest.approx(e_el + e_ph, abs=1e-8)


def test_dressed_pair_matches_physical_ground_energy():
    # physical v', w' at matched grids: E(4D) - e0_aux = E(3D)
    model = make_helium_model(0.58037, 0.1)
    xg = model.x_grid(17)
    qg = model.mode_grid(20)
    g4 = ProductGrid((xg, qg, xg, qg))
    h4 = build_exact_hamiltonian(model, g4, DRESSED_PAIR)
    g3 = ProductGrid((xg, xg, qg))
    h3 = build_exact_hamiltonian(model, g3, HELIUM_GRID)
    e4 = spla.eigsh(h4.sparse_active(), k=1, which="SA", tol=1e-12)[0][0]
    e3 = spla.eigsh(h3.sparse_active(), k=1, which="SA", tol=1e-12)[0][0]
    haux = (-0.5 * oracle_lap1d(qg.n, qg.dx) + sp.diags(0.5 * model.omega**2 * qg.points**2))
    e_aux = spla.eigsh(haux.tocsr(), k=1, which="SA", tol=1e-13)[0][0]
    assert e4 - e_aux == pytest.approx(e3, abs=1e-7)


def test_flags_ablate_terms():
    model = make_helium_model(0.58037, 0.1,
                              InteractionFlags(include_w=False, include_quadratic=False))
    xg = model.x_grid(11)
    pg = model.mode_grid(8)
    grids = ProductGrid((xg, xg, pg))
    h = build_exact_hamiltonian(model, grids, HELIUM_GRID)
    x = xg.points
    p = pg.points
    expect = (soft_coulomb_v(x)[:, None, None] + soft_coulomb_v(x)[None, :, None]
              + 0.5 * model.omega**2 * p[None, None, :] ** 2
              - model.omega * model.lam * (x[:, None, None] + x[None, :, None]) * p)
    assert np.allclose(h.potential, expect, atol=1e-14)


def test_representation_mismatch_raises():
    model = make_two_site_model(0.5, 1.0, 0.01)
    with pytest.raises(ValueError, match="mismatch"):
        build_exact_hamiltonian(model, two_site_grids(model), HELIUM_GRID)
