"""Post-hoc residual diagnostics: discrete continuity and mode-resolved
Maxwell residuals evaluated from recorded snapshots (never inside the stepping
loop), plus the dressed bilinear force and its exact-relation partner.
"""

from __future__ import annotations

import numpy as np

from .grids import Grid1D, ProductGrid
from .models import ModelSystem
from .series import ObservableSeries
from .states import ExactState, HELIUM_GRID

SQRT2 = np.sqrt(2.0)


def _ddx(f: np.ndarray, dx: float, axis: int = 0) -> np.ndarray:
    out = np.zeros_like(f)
    g = np.moveaxis(f, axis, 0)
    o = np.moveaxis(out, axis, 0)
    o[1:-1] = (g[2:] - g[:-2]) / (2 * dx)
    return out


def continuity_residual(n_prev: np.ndarray, n_next: np.ndarray, j: np.ndarray,
                        axes, dt_sample: float) -> float:
    """max-norm of (n(t+h) - n(t-h))/(2h) + div j(t).

    `axes` lists the Grid1D spatial axes of the density (one for n(x), two for
    the dressed n'(x,q)); j carries one leading component index per axis.
    """
    if n_prev.shape != n_next.shape:
        raise ValueError("stride mismatch: surrounding snapshots differ in shape")
    dndt = (n_next - n_prev) / (2.0 * dt_sample)
    j = np.asarray(j)
    if j.shape[0] != len(axes):
        raise ValueError("current components do not match the density axes")
    div = np.zeros_like(dndt)
    for k, ax in enumerate(axes):
        div += _ddx(j[k], ax.dx, axis=k)
    res = dndt + div
    # skip the stencil-edge layer where one-sided effects dominate
    core = tuple(slice(2, -2) for _ in axes)
    return float(np.max(np.abs(res[core])))


def maxwell_residual(t: np.ndarray, p: np.ndarray, R: np.ndarray,
                     model: ModelSystem) -> np.ndarray:
    """p'' + omega^2 p - omega lambda R + Jdot/omega by centered differences.

    Returns an array aligned with t (NaN at the ends).
    """
    t = np.asarray(t, float)
    if t.size < 3:
        raise ValueError("too-few samples for a second difference")
    h = t[1] - t[0]
    if not np.allclose(np.diff(t), h, rtol=1e-10, atol=1e-12):
        raise ValueError("maxwell residual needs uniformly sampled series")
    res = np.full(t.size, np.nan)
    pdd = (p[2:] - 2 * p[1:-1] + p[:-2]) / h**2
    om = model.omega
    jd = np.array([model.jdot_at(ti) for ti in t[1:-1]])
    res[1:-1] = pdd + om**2 * p[1:-1] - om * model.lam * R[1:-1] + jd / om
    return res


def flin_dressed(nprime: np.ndarray, zgrids: ProductGrid, model: ModelSystem) -> np.ndarray:
    """Dressed bilinear force density lambda * integral (omega q / sqrt(N)) n'(x,q) dq."""
    qg = zgrids.axes[1]
    return model.lam * (model.omega / SQRT2) * (nprime @ (qg.weights * qg.points))


def flin_physical(state: ExactState, model: ModelSystem) -> np.ndarray:
    """Physical bilinear force lambda * omega * <p n(x)> from a helium-grid state."""
    if state.representation != HELIUM_GRID:
        raise ValueError("physical bilinear force needs the (x1,x2,p) representation")
    _, xg2, pg = state.grids.axes
    rho = np.abs(state.psi) ** 2
    pn = 2.0 * np.einsum("abp,b,p->a", rho, xg2.weights, pg.weights * pg.points)
    return model.lam * model.omega * pn


def attach_maxwell_residual(series: ObservableSeries, model: ModelSystem) -> ObservableSeries:
    res = maxwell_residual(series.t, series.columns["p"], series.columns["dipole_R"], model)
    series.columns["maxwell_res"] = res
    return series


def attach_continuity_residual(series: ObservableSeries, axes,
                               density_key: str = "n_x",
                               current_key: str = "j_x") -> ObservableSeries:
    """Fill the continuity column from recorded density/current snapshots."""
    if density_key not in series.densities or current_key not in series.densities:
        return series
    t = series.t
    n = series.densities[density_key]
    j = series.densities[current_key]
    shape = tuple(ax.n for ax in axes)
    ncomp = len(axes)
    out = np.full(t.size, np.nan)
    h = t[1] - t[0] if t.size > 1 else np.nan
    for i in range(1, t.size - 1):
        ji = j[i].reshape((ncomp,) + shape) if ncomp > 1 else j[i].reshape((1,) + shape)
        out[i] = continuity_residual(n[i - 1].reshape(shape), n[i + 1].reshape(shape),
                                     ji, axes, h)
    series.columns["continuity_res"] = out
    return series
