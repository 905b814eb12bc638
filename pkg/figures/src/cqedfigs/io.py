"""Readers for the cqedlab CSV interface.

Trajectory files carry the fixed header
t, norm, energy, dipole_R, p, pdot, delta_p, continuity_res, maxwell_res;
density files are matrices with a leading time column (one row per recorded
time, columns in grid order); the scaled-approximation study writes small
labelled tables. Only these documented formats are consumed here.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

TRAJECTORY_COLUMNS = ("t", "norm", "energy", "dipole_R", "p", "pdot", "delta_p",
                      "continuity_res", "maxwell_res")


class ColumnMismatch(ValueError):
    pass


def read_trajectory(path) -> dict:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if tuple(header) != TRAJECTORY_COLUMNS:
        raise ColumnMismatch(f"{path}: expected trajectory header, got {header}")
    if data.size == 0:
        raise ColumnMismatch(f"{path}: empty trajectory file")
    return {name: data[:, i] for i, name in enumerate(header)}


def read_density(path) -> tuple[np.ndarray, np.ndarray]:
    """Returns (t, matrix) with one density snapshot per row."""
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if not header or header[0] != "t" or len(header) < 2:
        raise ColumnMismatch(f"{path}: expected a density matrix with a time column")
    if data.size == 0 or data.shape[1] != len(header):
        raise ColumnMismatch(f"{path}: density matrix shape does not match header")
    return data[:, 0], data[:, 1:]


def read_labelled_table(path) -> dict:
    """suppv table: first column is a label, remaining columns are floats."""
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    if len(header) < 2:
        raise ColumnMismatch(f"{path}: expected a labelled table")
    out = {}
    for row in rows:
        if len(row) != len(header):
            raise ColumnMismatch(f"{path}: ragged row {row}")
        out[row[0]] = {h: float(v) for h, v in zip(header[1:], row[1:])}
    return out


def read_xy_table(path) -> tuple[np.ndarray, dict]:
    """x-indexed table (e.g. density changes): returns (x, {name: column})."""
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if header[0] != "x" or data.size == 0:
        raise ColumnMismatch(f"{path}: expected an x-indexed table")
    return data[:, 0], {name: data[:, i + 1] for i, name in enumerate(header[1:])}
