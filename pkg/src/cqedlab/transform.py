"""Auxiliary-coordinate machinery: the orthogonal p <-> q transform for any
electron count, embedding of a physical wavefunction into the dressed pair
space for N=2, M=1, and the density reductions used as cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .grids import Grid1D, ProductGrid, integrate
from .models import vacuum_gaussian
from .states import DRESSED_PAIR, HELIUM_GRID, ExactState, normalized

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class DressingMatrix:
    """Orthogonal map from auxiliary coordinates (q_1..q_N) to (p, p_2..p_N).

    Row 0 is the symmetric combination (1/sqrt(N), ..., 1/sqrt(N)) defining the
    photon displacement; row k-1 (k >= 2) is the center-of-mass-style
    combination (q_1 + ... + q_{k-1} - (k-1) q_k)/sqrt(k^2 - k).
    """

    n: int
    matrix: np.ndarray


def dressing_matrix(n: int) -> DressingMatrix:
    if n < 2:
        raise ValueError(f"need at least 2 electrons, got {n}")
    m = np.zeros((n, n))
    m[0, :] = 1.0 / np.sqrt(n)
    for k in range(2, n + 1):
        m[k - 1, : k - 1] = 1.0 / np.sqrt(k * k - k)
        m[k - 1, k - 1] = -(k - 1) / np.sqrt(k * k - k)
    return DressingMatrix(n=n, matrix=m)


def embed_dressed(psi: ExactState, omega: float, qgrids: tuple[Grid1D, Grid1D],
                  boundary_tol: float = 1e-6) -> ExactState:
    """Embed a helium-grid state as Psi'(x1,q1,x2,q2) = Psi(x1,x2,p) chi(p2).

    p = (q1+q2)/sqrt(2) is evaluated by cubic interpolation of Psi along its
    p-axis (exact whenever the q-grids are aligned so p lands on the knots);
    chi is the auxiliary vacuum Gaussian. The result is renormalized.
    """
    if psi.representation != HELIUM_GRID:
        raise ValueError("embedding expects a helium-grid (x1,x2,p) state")
    xg1, xg2, pg = psi.grids.axes
    q1g, q2g = qgrids
    q1 = q1g.points
    q2 = q2g.points
    psum = (q1[:, None] + q2[None, :]) / SQRT2
    pdiff = (q1[:, None] - q2[None, :]) / SQRT2
    if psum.min() < pg.min - 1e-12 or psum.max() > pg.max + 1e-12:
        raise ValueError("q-grid too large: (q1+q2)/sqrt(2) leaves the p-grid")

    spline = CubicSpline(pg.points, psi.psi, axis=2)
    if abs(q1g.dx - q2g.dx) < 1e-12:
        # uniform equal spacing: (q1_i + q2_j) depends on i+j only
        diag = (q1[0] + q2[0] + q1g.dx * np.arange(q1g.n + q2g.n - 1)) / SQRT2
        vals_diag = spline(diag)                    # (nx, nx, nq1+nq2-1)
        idx = np.add.outer(np.arange(q1g.n), np.arange(q2g.n))
        vals = vals_diag[:, :, idx]                 # (nx, nx, nq1, nq2)
    else:
        vals = spline(psum.ravel()).reshape(xg1.n, xg2.n, q1g.n, q2g.n)
    chi = (omega / np.pi) ** 0.25 * np.exp(-0.5 * omega * pdiff**2)
    out = vals * chi[None, None, :, :]
    out = np.ascontiguousarray(np.transpose(out, (0, 2, 1, 3)))  # (x1, q1, x2, q2)

    edge = max(np.abs(out[:, 0, :, :]).max(), np.abs(out[:, -1, :, :]).max(),
               np.abs(out[:, :, :, 0]).max(), np.abs(out[:, :, :, -1]).max())
    if edge > boundary_tol:
        raise ValueError(f"q-grid too small: boundary amplitude {edge:.2e} > {boundary_tol:.0e}")

    grids = ProductGrid((xg1, q1g, xg2, q2g))
    state = ExactState(DRESSED_PAIR, grids, out)
    state.psi = normalized(grids, state.psi)
    return state


def reduce_dressed_density(state: ExactState, want_pair_density: bool = False) -> dict:
    """Density reductions of a dressed-pair state.

    Returns n_prime(x,q), n(x), p, and two fluctuation estimators:
    ``delta_p`` uses the exact pair density (cross term <q1 q2>), matching
    <p^2>-p^2 for physical states; ``delta_p_nprime`` is the density-only
    estimator that a doubly-occupied Kohn-Sham reduction yields, which is the
    quantity the scaled-approximation comparisons quote.
    """
    if state.representation != DRESSED_PAIR:
        raise ValueError("expects a dressed-pair (x1,q1,x2,q2) state")
    xg, qg = state.grids.axes[0], state.grids.axes[1]
    wx = xg.weights
    wq = qg.weights
    q = qg.points
    rho = np.abs(state.psi) ** 2

    # n'(z) = 2 * integral over z2 of |Psi'|^2
    nprime = 2.0 * np.einsum("aibj,b,j->ai", rho, wx, wq)
    n_x = nprime @ wq
    p = float(np.einsum("ai,a,i,i->", nprime, wx, wq, q)) / SQRT2
    q1_sq = float(np.einsum("ai,a,i,i->", nprime, wx, wq, q**2)) / 2.0
    q1q2 = float(np.einsum("aibj,a,b,i,j,i,j->", rho, wx, wx, wq, wq, q, q))
    out = {
        "n_prime": nprime,
        "n_x": n_x,
        "p": p,
        "delta_p": q1_sq + q1q2 - p**2,
        "delta_p_nprime": q1_sq - 0.5 * p**2,
    }
    if want_pair_density:
        out["rho2_prime"] = rho  # N(N-1)/2 = 1 for two particles
    return out
