"""Run orchestration: executes a RunConfig, writes trajectory/density CSVs and
a JSON manifest, and hosts the figure-reproduction drivers (fig1, fig2, suppv)
plus the quick invariant check suite.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np

from . import __version__
from .diagnostics import attach_continuity_residual, attach_maxwell_residual
from .dressed import (MxcApproximation, dressed_grids, dressed_ground_state,
                      dressed_observables, electron_orbital_ground,
                      initial_dressed_orbital, propagate_dressed)
from .exact import (bare_helium_states, exact_ground_state, exact_observables,
                    helium_initial_state, propagate_exact, two_site_initial_state)
from .grids import ProductGrid, make_uniform_grid, photon_grid
from .hamiltonian import build_exact_hamiltonian, two_site_config_basis
from .models import HELIUM_1D, InteractionFlags, TWO_SITE, make_helium_model
from .runconfig import RunConfig
from .series import Recorder, density_to_csv, series_to_csv
from .standard import initial_standard_state, propagate_standard
from .states import DRESSED_PAIR, ELECTRON_PAIR, HELIUM_GRID, TWO_SITE_REP
from .transform import reduce_dressed_density


def _grids_from_config(cfg: RunConfig, model):
    g = cfg.sections["grids"]
    if model.kind == TWO_SITE:
        xaxis = model.site_basis()
    else:
        xaxis = make_uniform_grid(g["x_min"], g["x_max"], g["x_n"], "hard-wall")
    qg = photon_grid(model.omega, g["q_n"], g["q_half_width_factor"])
    pg = photon_grid(model.omega, g["p_n"], g["p_half_width_factor"])
    return xaxis, qg, pg


def _recorder(cfg: RunConfig) -> Recorder:
    o = cfg.sections["output"]
    return Recorder(stride=cfg["propagation.stride"], densities=o["densities"],
                    currents=o["currents"], fluctuations=o["fluctuations"])


def _write_outputs(outdir: Path, label: str, series, manifest_extra: dict):
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / f"{label}_series.csv").write_text(series_to_csv(series), encoding="utf-8")
    for name, _ in series.densities.items():
        (outdir / f"{label}_{name.replace('_', '')}.csv").write_text(
            density_to_csv(series, name), encoding="utf-8")
    manifest = {"label": label, "version": __version__, **manifest_extra}
    (outdir / f"{label}_manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _electron_seed(model, xaxis):
    if model.kind == TWO_SITE:
        return np.array([np.sqrt(0.25), np.sqrt(0.75)])
    bare = model.with_lambda(0.0)
    _, phi = electron_orbital_ground(bare, xaxis)
    return phi


def run_propagation(cfg: RunConfig, label: str | None = None) -> dict:
    """Execute the configured solver; returns a result summary dict."""
    model = cfg.model()
    xaxis, qg, pg = _grids_from_config(cfg, model)
    p = cfg.sections["propagation"]
    solver = cfg["approximation.solver"]
    variant = cfg["approximation.variant"]
    rec = _recorder(cfg)
    label = label or solver.replace("-", "_") + ("" if solver == "exact" else f"_{variant}")
    t_start = time.time()

    if solver == "exact":
        if model.kind == TWO_SITE:
            state = two_site_initial_state(model, pg)
            grids = state.grids
        else:
            _, psi0 = exact_ground_state(model.with_lambda(0.0),
                                         ProductGrid((xaxis, xaxis)), ELECTRON_PAIR)
            state = helium_initial_state(psi0, pg, model.omega)
            grids = state.grids
        h = build_exact_hamiltonian(model, grids, state.representation)
        series = propagate_exact(state, h, p["dt"], p["steps"], rec, p["scheme"])
        if model.kind == HELIUM_1D and rec.currents:
            attach_continuity_residual(series, (grids.axes[0],))
    elif solver == "dressed-ks":
        zg = ProductGrid((xaxis, qg))
        orb = initial_dressed_orbital(model, zg, _electron_seed(model, xaxis))
        approx = MxcApproximation(variant)
        series = propagate_dressed(orb, model, approx, p["dt"], p["steps"], rec, p["scheme"])
    elif solver == "standard-ks":
        st = initial_standard_state(model, xaxis, _electron_seed(model, xaxis), pg,
                                    fluctuations=rec.fluctuations)
        series = propagate_standard(st, model, variant, p["dt"], p["steps"], rec,
                                    scheme="crank-nicolson")
    else:
        raise ValueError("dressed-exact runs ground states only; use the gs/suppv commands")

    attach_maxwell_residual(series, model)
    outdir = Path(cfg["output.directory"])
    _write_outputs(outdir, label, series,
                   {"config": cfg.as_flat_dict(), "wall_time_s": time.time() - t_start})
    return {"label": label, "series": series, "outdir": outdir}


def run_ground_state(cfg: RunConfig) -> dict:
    """Ground-state summary for the configured model/solver."""
    model = cfg.model()
    xaxis, qg, pg = _grids_from_config(cfg, model)
    solver = cfg["approximation.solver"]
    out: dict = {"solver": solver, "kind": model.kind}
    if solver == "exact" and model.kind == HELIUM_1D:
        (e0, s0), (e1, s1) = bare_helium_states(model.with_lambda(0.0), xaxis)
        out.update(E0=e0, E1=e1, omega_1=e1 - e0)
    elif solver == "exact":
        grids = ProductGrid((two_site_config_basis(), pg))
        e0, _ = exact_ground_state(model, grids, TWO_SITE_REP)
        out.update(E0=e0)
    elif solver == "dressed-exact":
        grids = ProductGrid((xaxis, qg, xaxis, qg))
        e0, st = exact_ground_state(model, grids, DRESSED_PAIR)
        red = reduce_dressed_density(st)
        out.update(E0=e0, delta_p=red["delta_p"], delta_p_nprime=red["delta_p_nprime"])
    elif solver == "dressed-ks":
        zg = ProductGrid((xaxis, qg))
        e0, orb = dressed_ground_state(model, MxcApproximation(cfg["approximation.variant"]), zg)
        obs = dressed_observables(orb, model)
        out.update(E0=e0, delta_p=obs["delta_p"])
    else:
        raise ValueError(f"gs does not support solver {solver!r}")
    return out


# ---------------------------------------------------------------------------
# figure reproduction drivers
# ---------------------------------------------------------------------------

def run_fig1(cfg: RunConfig) -> list[dict]:
    """Two-site dipole traces: exact, dressed-mx, standard-mx, standard-mf."""
    results = []
    base = {k: v for k, v in cfg.as_flat_dict().items()}
    for solver, variant, label in (("exact", "mx", "fig1_exact"),
                                   ("dressed-ks", "mx", "fig1_dressed_mx"),
                                   ("standard-ks", "mx", "fig1_standard_mx"),
                                   ("standard-ks", "mean-field", "fig1_standard_mf")):
        sub = _override(cfg, {"approximation.solver": solver,
                              "approximation.variant": variant})
        results.append(run_propagation(sub, label=label))
    return results


def run_fig2(cfg: RunConfig) -> list[dict]:
    """Helium cavity runs: exact, dressed-mx, standard-mx, standard-mf."""
    results = []
    for solver, variant, label in (("exact", "mx", "fig2_exact"),
                                   ("dressed-ks", "mx", "fig2_dressed_mx"),
                                   ("standard-ks", "mx", "fig2_standard_mx"),
                                   ("standard-ks", "mean-field", "fig2_standard_mf")):
        sub = _override(cfg, {"approximation.solver": solver,
                              "approximation.variant": variant})
        results.append(run_propagation(sub, label=label))
    return results


def run_suppv(cfg: RunConfig) -> dict:
    """Scaled-approximation ground-state study (with w, no quadratic terms):
    4D tilde/physical fluctuation changes plus dressed-KS density changes."""
    g = cfg.sections["grids"]
    omega = cfg["model.omega"]
    lam = cfg["model.lambda"]
    nx = min(g["x_n"], 48)  # 4D solves cap the per-axis resolution
    nq = min(g["q_n"], 48)
    base_flags = InteractionFlags(include_w=True, include_quadratic=False)
    model0 = make_helium_model(omega, 0.0, base_flags)
    xg = make_uniform_grid(g["x_min"], g["x_max"], nx, "hard-wall")
    qg = photon_grid(omega, nq, g["q_half_width_factor"])
    g4 = ProductGrid((xg, qg, xg, qg))

    # product seed: bare correlated pair times vacuum Gaussians
    _, s_el = exact_ground_state(model0, ProductGrid((xg, xg)), ELECTRON_PAIR)
    from .models import vacuum_gaussian
    gq = vacuum_gaussian(qg, omega)
    seed = np.einsum("ab,i,j->aibj", np.real(s_el.psi), gq, gq)

    rows = {}
    dens = {"x": xg.points}
    e0, st0 = exact_ground_state(model0, g4, DRESSED_PAIR, v0=seed)
    red0 = reduce_dressed_density(st0)
    rows["lambda0"] = {"energy": e0, "delta_p": red0["delta_p"],
                       "delta_p_nprime": red0["delta_p_nprime"]}
    variants = {
        "exact": base_flags,
        "tmx": InteractionFlags(True, False, 1.0, True),
        "tsqrtsmx": InteractionFlags(True, False, np.sqrt(2.0)),
        "tsmx": InteractionFlags(True, False, 2.0),
    }
    seed4 = np.real(st0.psi)
    for name, flags in variants.items():
        model = make_helium_model(omega, lam, flags)
        e, st = exact_ground_state(model, g4, DRESSED_PAIR, v0=seed4)
        red = reduce_dressed_density(st)
        est = red["delta_p"] if name == "exact" else red["delta_p_nprime"]
        ref = red0["delta_p"] if name == "exact" else red0["delta_p_nprime"]
        rows[name] = {"energy": e, "delta_p": red["delta_p"],
                      "delta_p_nprime": red["delta_p_nprime"], "change": est - ref}
        dens[name] = red["n_x"] - red0["n_x"]

    # dressed-KS ground-state density changes for the three scalings
    zg = ProductGrid((make_uniform_grid(g["x_min"], g["x_max"], g["x_n"], "hard-wall"),
                      photon_grid(omega, g["q_n"], g["q_half_width_factor"])))
    ks_model0 = make_helium_model(omega, 0.0, base_flags)
    _, orb0 = dressed_ground_state(ks_model0, MxcApproximation("mx"), zg)
    n0 = dressed_observables(orb0, ks_model0)["n_x"]
    ks = {"n0": n0, "x": zg.axes[0].points}
    for variant in ("mx", "sqrt-smx", "smx"):
        m = make_helium_model(omega, lam, base_flags)
        _, orb = dressed_ground_state(m, MxcApproximation(variant), zg)
        ks[variant] = dressed_observables(orb, m)["n_x"] - n0
    return {"fluctuations": rows, "tilde_density_changes": dens,
            "ks_density_changes": ks}


def write_suppv_outputs(outdir: Path, res: dict, cfg: RunConfig):
    outdir.mkdir(parents=True, exist_ok=True)
    lines = ["system,energy,delta_p,delta_p_nprime,change"]
    for name, row in res["fluctuations"].items():
        lines.append(",".join([name, format(row["energy"], ".17g"),
                               format(row["delta_p"], ".17g"),
                               format(row["delta_p_nprime"], ".17g"),
                               format(row.get("change", 0.0), ".17g")]))
    (outdir / "suppv_fluctuations.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    dens = res["tilde_density_changes"]
    names = [k for k in ("exact", "tmx", "tsqrtsmx", "tsmx") if k in dens]
    rows_d = ["x," + ",".join(names)]
    for i, x in enumerate(dens["x"]):
        rows_d.append(",".join(format(v, ".17g") for v in
                               [x] + [dens[n][i] for n in names]))
    (outdir / "suppv_tilde_density_changes.csv").write_text(
        "\n".join(rows_d) + "\n", encoding="utf-8")
    ks = res["ks_density_changes"]
    header = "x," + ",".join(k for k in ("mx", "sqrt-smx", "smx"))
    rows = [header]
    for i, x in enumerate(ks["x"]):
        rows.append(",".join(format(v, ".17g") for v in
                             (x, ks["mx"][i], ks["sqrt-smx"][i], ks["smx"][i])))
    (outdir / "suppv_ks_density_changes.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    (outdir / "suppv_manifest.json").write_text(
        json.dumps({"config": cfg.as_flat_dict(), "version": __version__},
                   indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _override(cfg: RunConfig, updates: dict) -> RunConfig:
    sections = {s: dict(v) for s, v in cfg.sections.items()}
    for key, val in updates.items():
        sec, _, name = key.partition(".")
        sections[sec][name] = val
    return RunConfig(sections)


# ---------------------------------------------------------------------------
# invariant check suite
# ---------------------------------------------------------------------------

def run_checks() -> list[tuple[str, bool, str]]:
    """Fast invariant suite: transform orthogonality, embedding identities,
    potential identities, residual convergence order."""
    from .checks import all_checks
    return all_checks()
