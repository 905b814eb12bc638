"""CLI smoke tests on tiny configurations, plus output determinism."""

import json
from pathlib import Path

import numpy as np
import pytest

from cqedlab.cli import main

TINY_TWO_SITE = """
[model]
kind = two-site
[grids]
p_n = 24
q_n = 24
[propagation]
dt = 0.02
steps = 40
stride = 10
scheme = krylov
"""

TINY_HELIUM = """
[model]
kind = helium-1d
[grids]
x_n = 31
p_n = 16
q_n = 16
[propagation]
dt = 0.02
steps = 20
stride = 10
"""


def _write(tmp_path, text):
    p = tmp_path / "run.cfg"
    p.write_text(text, encoding="utf-8")
    return str(p)


def test_prop_two_site_exact(tmp_path):
    cfg = _write(tmp_path, TINY_TWO_SITE)
    out = tmp_path / "out"
    rc = main(["prop", "--config", cfg, "--out", str(out)])
    assert rc == 0
    files = sorted(f.name for f in out.iterdir())
    assert "exact_series.csv" in files
    assert "exact_manifest.json" in files
    manifest = json.loads((out / "exact_manifest.json").read_text())
    assert manifest["config"]["model.kind"] == "two-site"
    assert manifest["wall_time_s"] > 0


def test_prop_reruns_byte_identical(tmp_path):
    cfg = _write(tmp_path, TINY_TWO_SITE)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["prop", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["prop", "--config", cfg, "--out", str(out2)]) == 0
    a = (out1 / "exact_series.csv").read_bytes()
    b = (out2 / "exact_series.csv").read_bytes()
    assert a == b


def test_prop_dressed_and_standard(tmp_path):
    for solver, fname in (("dressed-ks", "dressed_ks_mx_series.csv"),
                          ("standard-ks", "standard_ks_mx_series.csv")):
        cfg = _write(tmp_path, TINY_HELIUM)
        out = tmp_path / solver
        rc = main(["prop", "--config", cfg, "--out", str(out),
                   "--override", f"approximation.solver={solver}"])
        assert rc == 0
        assert (out / fname).exists()


def test_gs_two_site(tmp_path, capsys):
    cfg = _write(tmp_path, TINY_TWO_SITE)
    rc = main(["gs", "--config", cfg])
    assert rc == 0
    out = capsys.readouterr().out
    assert "E0 = " in out


def test_gs_helium_prints_omega1(tmp_path, capsys):
    cfg = _write(tmp_path, TINY_HELIUM)
    rc = main(["gs", "--config", cfg, "--override", "grids.x_n=61"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "omega_1" in out
    val = float([l for l in out.splitlines() if l.startswith("omega_1")][0].split("=")[1])
    assert abs(val - 0.58) < 0.02  # coarse grid rendition


def test_bad_config_returns_2(tmp_path, capsys):
    cfg = _write(tmp_path, "[model]\nomega = -3\n")
    rc = main(["prop", "--config", cfg])
    assert rc == 2
    assert "omega" in capsys.readouterr().err


def test_unknown_override_returns_2(tmp_path, capsys):
    cfg = _write(tmp_path, TINY_TWO_SITE)
    rc = main(["prop", "--config", cfg, "--override", "model.omga=1"])
    assert rc == 2
    assert "omga" in capsys.readouterr().err


@pytest.mark.slow
def test_fig1_writes_four_trajectories(tmp_path):
    cfg = _write(tmp_path, TINY_TWO_SITE)
    out = tmp_path / "fig1"
    rc = main(["fig1", "--config", cfg, "--out", str(out)])
    assert rc == 0
    for label in ("fig1_exact", "fig1_dressed_mx", "fig1_standard_mx", "fig1_standard_mf"):
        assert (out / f"{label}_series.csv").exists()
