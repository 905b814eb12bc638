"""Deterministic renderers for the reproduction figures.

Colors follow the source captions: exact curves in orange (two-site) or blue
(helium), dressed Mx red, standard Mx blue/orange, scaled variants orange and
lilac. Rendering is a pure function of the input CSVs under the pinned style.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .io import ColumnMismatch, read_density, read_trajectory, read_xy_table

LILAC = "#b57edc"

STYLE = {
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "font.size": 9,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.1,
    "svg.hashsalt": "cqedfigs",
}

FIGURES = ("fig1", "fig2", "supp-two-site", "supp-bilinear", "supp-bilinear-w", "supp-ks")

# required curve keys per figure id
EXPECTED_CURVES = {
    "fig1": ("exact", "dressed_mx", "standard_mx"),
    "supp-two-site": ("exact", "dressed_smx", "dressed_mx", "standard_mx"),
    "fig2": ("exact_series", "dressed_series", "standard_series",
             "exact_density", "dressed_density", "standard_density"),
    "supp-bilinear": ("density_changes",),
    "supp-bilinear-w": ("density_changes",),
    "supp-ks": ("density_changes",),
}


@dataclass(frozen=True)
class FigureSpec:
    figure: str
    inputs: dict
    output: str

    def __post_init__(self):
        if self.figure not in FIGURES:
            raise ValueError(f"unknown figure id {self.figure!r}")
        missing = [k for k in EXPECTED_CURVES[self.figure] if k not in self.inputs]
        if missing:
            raise ValueError(f"{self.figure}: missing curves {missing}")
        for key, path in self.inputs.items():
            if not Path(path).exists():
                raise FileNotFoundError(f"{self.figure}: input {key} not found at {path}")


def _save(fig, output: str):
    out = Path(output)
    out.parent.mkdir(parents=True, exist_ok=True)
    meta = {"Date": None} if out.suffix == ".svg" else {}
    fig.savefig(out, metadata=meta)
    plt.close(fig)
    return out


def _dipole_traces(spec: FigureSpec, curves):
    fig, ax = plt.subplots(figsize=(6.4, 3.2), constrained_layout=True)
    for key, label, color in curves:
        tr = read_trajectory(spec.inputs[key])
        ax.plot(tr["t"], tr["dipole_R"], color=color, label=label, alpha=0.9)
    ax.set_xlabel("t (a.u.)")
    ax.set_ylabel("dipole moment (a.u.)")
    ax.legend(loc="upper right", frameon=False, ncol=2)
    return _save(fig, spec.output)


def render_fig1(spec: FigureSpec):
    curves = [("exact", "exact", "tab:orange"),
              ("dressed_mx", "dressed Mx", "tab:red"),
              ("standard_mx", "standard Mx", "tab:blue")]
    if "standard_mf" in spec.inputs:
        curves.append(("standard_mf", "standard MF", "tab:green"))
    return _dipole_traces(spec, curves)


def render_supp_two_site(spec: FigureSpec):
    return _dipole_traces(spec, [("exact", "exact", "tab:orange"),
                                 ("dressed_smx", "dressed sMx", LILAC),
                                 ("dressed_mx", "dressed Mx", "tab:red"),
                                 ("standard_mx", "standard Mx", "tab:blue")])


def render_fig2(spec: FigureSpec):
    fig, axes = plt.subplots(5, 1, figsize=(5.2, 9.6), constrained_layout=True)
    t0, n_ex = read_density(spec.inputs["exact_density"])
    t1, n_dr = read_density(spec.inputs["dressed_density"])
    t2, n_sm = read_density(spec.inputs["standard_density"])
    if min(n_ex.shape[0], n_dr.shape[0], n_sm.shape[0]) < 2:
        raise ColumnMismatch("fig2 needs at least two density snapshots per run")
    x = np.linspace(-5, 5, n_ex.shape[1])

    ax = axes[0]
    ax.plot(x, n_ex[0], color="tab:blue", label="exact")
    xd = np.linspace(-5, 5, n_dr.shape[1])
    ax.plot(xd, n_dr[0], color="tab:red", label="Mx")
    ax.set_ylabel("n0(x)")
    ax.legend(frameon=False)

    for ax, (tt, nn, xx, label, cmap_label) in zip(
            axes[1:4],
            ((t0, n_ex, x, "exact", "(b)"), (t1, n_dr, xd, "dressed Mx", "(c)"),
             (t2, n_sm, np.linspace(-5, 5, n_sm.shape[1]), "standard Mx", "(d)"))):
        dn = nn - nn[0]
        lim = max(np.abs(dn).max(), 1e-12)
        im = ax.pcolormesh(tt, xx, dn.T, cmap="RdBu_r", vmin=-lim, vmax=lim,
                           shading="nearest", rasterized=True)
        ax.set_ylabel(f"x  [{label}]")
        fig.colorbar(im, ax=ax, label="dn(x,t)")

    ax = axes[4]
    for key, label, color in (("exact_series", "exact", "tab:blue"),
                              ("dressed_series", "dressed Mx", "tab:red"),
                              ("standard_series", "standard Mx", "tab:orange")):
        tr = read_trajectory(spec.inputs[key])
        ax.plot(tr["t"], tr["delta_p"], color=color, label=label)
    ax.set_xlabel("t (a.u.)")
    ax.set_ylabel("field fluctuations")
    ax.legend(frameon=False)
    return _save(fig, spec.output)


def _density_change_panel(spec: FigureSpec, columns):
    x, cols = read_xy_table(spec.inputs["density_changes"])
    fig, ax = plt.subplots(figsize=(5.4, 3.2), constrained_layout=True)
    for name, label, color in columns:
        if name not in cols:
            raise ColumnMismatch(f"{spec.figure}: missing column {name!r}")
        ax.plot(x, cols[name], color=color, label=label)
    ax.set_xlabel("x (a.u.)")
    ax.set_ylabel("dn(x)")
    ax.legend(frameon=False)
    return _save(fig, spec.output)


def render_supp_bilinear(spec: FigureSpec):
    return _density_change_panel(spec, (("exact", "exact", "tab:blue"),
                                        ("tmx", "tMx", "tab:red"),
                                        ("tsqrtsmx", "t sqrt-sMx", "tab:orange"),
                                        ("tsmx", "tsMx", LILAC)))


def render_supp_ks(spec: FigureSpec):
    return _density_change_panel(spec, (("mx", "dressed Mx", "tab:red"),
                                        ("sqrt-smx", "dressed sqrt-sMx", "tab:orange"),
                                        ("smx", "dressed sMx", LILAC)))


RENDERERS = {
    "fig1": render_fig1,
    "fig2": render_fig2,
    "supp-two-site": render_supp_two_site,
    "supp-bilinear": render_supp_bilinear,
    "supp-bilinear-w": render_supp_bilinear,
    "supp-ks": render_supp_ks,
}


def render(spec: FigureSpec):
    """Render one figure; deterministic under the pinned style."""
    with plt.rc_context(STYLE):
        return RENDERERS[spec.figure](spec)
