"""Time-series containers and the CSV formats shared by all propagators.

The trajectory CSV has the fixed header t, norm, energy, dipole_R, p, pdot,
delta_p, continuity_res, maxwell_res (residual columns are filled post-hoc by
the diagnostics); density snapshots go to separate CSV matrices, one row per
recorded time, columns in grid order (dressed n' flattened x-major).
All values are written with 17 significant digits so reruns are byte-stable.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

COLUMNS = ("t", "norm", "energy", "dipole_R", "p", "pdot", "delta_p",
           "continuity_res", "maxwell_res")


@dataclass
class Recorder:
    """What to sample during a propagation run."""

    stride: int = 10
    densities: bool = True
    currents: bool = False
    fluctuations: bool = True  # standard-KS only: carry the photon orbital


@dataclass
class ObservableSeries:
    t: np.ndarray
    columns: dict
    densities: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        if name == "t":
            return self.t
        return self.columns[name]

    def __len__(self):
        return self.t.size


class SeriesBuilder:
    def __init__(self):
        self._rows: list[dict] = []
        self._densities: dict[str, list[np.ndarray]] = {}

    def add_row(self, t: float, **values):
        row = {"t": t}
        row.update(values)
        self._rows.append(row)

    def add_density(self, name: str, snapshot: np.ndarray):
        self._densities.setdefault(name, []).append(np.asarray(snapshot).ravel().copy())

    def build(self, meta: dict | None = None) -> ObservableSeries:
        t = np.array([r["t"] for r in self._rows])
        names = [k for k in self._rows[0] if k != "t"]
        cols = {k: np.array([r.get(k, np.nan) for r in self._rows]) for k in names}
        for c in ("continuity_res", "maxwell_res"):
            cols.setdefault(c, np.full(t.size, np.nan))
        dens = {k: np.vstack(v) for k, v in self._densities.items()}
        return ObservableSeries(t=t, columns=cols, densities=dens, meta=meta or {})


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def series_to_csv(series: ObservableSeries) -> str:
    buf = io.StringIO()
    buf.write(",".join(COLUMNS) + "\n")
    for i in range(len(series)):
        vals = [series.t[i]] + [series.columns.get(c, np.full(len(series), np.nan))[i]
                                for c in COLUMNS[1:]]
        buf.write(",".join(_fmt(v) for v in vals) + "\n")
    return buf.getvalue()


def density_to_csv(series: ObservableSeries, name: str) -> str:
    arr = series.densities[name]
    buf = io.StringIO()
    buf.write("t," + ",".join(f"c{j}" for j in range(arr.shape[1])) + "\n")
    for i in range(arr.shape[0]):
        buf.write(_fmt(series.t[i]) + "," + ",".join(_fmt(v) for v in arr[i]) + "\n")
    return buf.getvalue()


def read_series_csv(path) -> ObservableSeries:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if header != list(COLUMNS):
        raise ValueError(f"unexpected trajectory header {header}")
    if data.size == 0:
        raise ValueError(f"empty trajectory file {path}")
    cols = {name: data[:, j] for j, name in enumerate(header)}
    t = cols.pop("t")
    if np.any(np.diff(t) <= 0):
        raise ValueError("non-monotone time column")
    return ObservableSeries(t=t, columns=cols)


def read_density_csv(path) -> tuple[np.ndarray, np.ndarray]:
    with open(path, "r", encoding="utf-8") as fh:
        fh.readline()
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.size == 0:
        raise ValueError(f"empty density file {path}")
    return data[:, 0], data[:, 1:]
