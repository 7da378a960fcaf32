"""Render figure analogs from the solver package's CSV outputs.

Inputs are the documented CSV schemas only (no solver imports):

    dissipation_samples.csv        kind,omega,nu,d
    scalar_w*_timeseries.csv       step,t,max_u
    scalar_w*_profile.csv          x,u
    mhd_*_profile.csv              x,rho,vx,vy,vz,By,Bz,E,p

Five figures are supported: fig1 (nu vs d(nu) curves), fig2a (max|u| vs
step), fig2b (scalar profile zoom near the jump), fig3a (density profiles),
fig3b (slow-shock zoom).  A file named mhd_reference_profile.csv, when
present, is overlaid dashed on fig3 in place of an exact solution.
"""

from __future__ import annotations

import csv
import glob
import os
import re
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGURE_IDS = ("fig1", "fig2a", "fig2b", "fig3a", "fig3b")

#: zoom window of the scalar profile figure (jump sits at x = 0.25 at t_end)
JUMP_ZOOM = (0.0, 0.5)
#: zoom window of the slow-shock figure
SLOW_SHOCK_ZOOM = (1.0, 1.6)

#: solver kinds whose dissipation curve carries no omega parameter
PLAIN_KINDS = {"upwind", "lax_friedrichs", "rusanov", "hll", "lax_wendroff", "p2"}

REFERENCE_FILE = "mhd_reference_profile.csv"


class RenderError(Exception):
    """Missing/malformed input; the message names the file (and column)."""


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    input_dir: str
    output_path: str

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise RenderError(
                f"unknown figure id {self.figure_id!r}; expected one of {FIGURE_IDS}")


def read_columns(path: str, required: tuple) -> dict:
    """Read CSV columns as float arrays; missing column or no rows is an error."""
    try:
        with open(path, newline="") as handle:
            reader = csv.DictReader(handle)
            header = reader.fieldnames or []
            for column in required:
                if column not in header:
                    raise RenderError(f"{path}: missing column {column!r}")
            rows = list(reader)
    except OSError as err:
        raise RenderError(f"{path}: {err}")
    if not rows:
        raise RenderError(f"{path}: no data rows")
    out = {}
    for column in header:
        try:
            out[column] = np.array([float(row[column]) for row in rows])
        except (TypeError, ValueError):
            if column in required:
                raise RenderError(f"{path}: non-numeric data in column {column!r}")
            out[column] = np.array([row[column] for row in rows])
    return out


def _find(input_dir: str, pattern: str) -> list:
    paths = sorted(glob.glob(os.path.join(input_dir, pattern)))
    if not paths:
        raise RenderError(f"no files matching {pattern!r} in {input_dir}")
    return paths


def _label_from(path: str, prefix: str, suffix: str) -> str:
    name = os.path.basename(path)
    return name[len(prefix):-len(suffix)] if name.endswith(suffix) else name


def _dissipation_groups(path: str):
    """Curves grouped by (kind, omega), preserving first-seen order."""
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        for column in ("kind", "omega", "nu", "d"):
            if reader.fieldnames is None or column not in reader.fieldnames:
                raise RenderError(f"{path}: missing column {column!r}")
        groups: dict = {}
        for row in reader:
            key = (row["kind"], row["omega"])
            groups.setdefault(key, []).append((float(row["nu"]), float(row["d"])))
    if not groups:
        raise RenderError(f"{path}: no data rows")
    out = []
    for (kind, omega), pairs in groups.items():
        label = kind if kind in PLAIN_KINDS else f"{kind} (w={float(omega):g})"
        nu, d = np.array(pairs).T
        out.append((label, nu, d))
    return out


def render(spec: FigureSpec) -> int:
    """Write the figure image; returns the number of solver curves drawn."""
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    try:
        count = _RENDERERS[spec.figure_id](spec.input_dir, ax)
        ax.legend(fontsize=8)
        fig.tight_layout()
        out_dir = os.path.dirname(os.path.abspath(spec.output_path))
        os.makedirs(out_dir, exist_ok=True)
        fig.savefig(spec.output_path, dpi=130)
    finally:
        plt.close(fig)
    return count


def _render_fig1(input_dir: str, ax) -> int:
    path = os.path.join(input_dir, "dissipation_samples.csv")
    if not os.path.exists(path):
        path = _find(input_dir, "*dissipation*.csv")[0]
    groups = _dissipation_groups(path)
    for label, nu, d in groups:
        ax.plot(nu, d, label=label)
    ax.set_xlabel(r"$\nu$")
    ax.set_ylabel(r"$d(\nu)$")
    ax.set_title("Scalar dissipation functions")
    return len(groups)


def _render_fig2a(input_dir: str, ax) -> int:
    paths = _find(input_dir, "scalar_w*_timeseries.csv")
    for path in paths:
        data = read_columns(path, ("step", "max_u"))
        label = _label_from(path, "scalar_", "_timeseries.csv")
        ax.plot(data["step"], data["max_u"], label=label.replace("w", "w="))
    ax.set_xlabel("time step")
    ax.set_ylabel("max |u|")
    ax.set_title("Running maximum of the transported jump")
    return len(paths)


def _render_fig2b(input_dir: str, ax) -> int:
    paths = _find(input_dir, "scalar_w*_profile.csv")
    for path in paths:
        data = read_columns(path, ("x", "u"))
        label = _label_from(path, "scalar_", "_profile.csv")
        ax.plot(data["x"], data["u"], label=label.replace("w", "w="))
    ax.set_xlim(*JUMP_ZOOM)
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.set_title("Profile zoom near the jump")
    return len(paths)


def _mhd_profiles(input_dir: str):
    paths = [p for p in _find(input_dir, "mhd_*_profile.csv")
             if os.path.basename(p) != REFERENCE_FILE]
    if not paths:
        raise RenderError(f"no solver profiles (mhd_*_profile.csv) in {input_dir}")
    return paths


def _render_fig3(input_dir: str, ax, window=None) -> int:
    paths = _mhd_profiles(input_dir)
    for path in paths:
        data = read_columns(path, ("x", "rho"))
        ax.plot(data["x"], data["rho"],
                label=_label_from(path, "mhd_", "_profile.csv"))
    reference = os.path.join(input_dir, REFERENCE_FILE)
    if os.path.exists(reference):
        data = read_columns(reference, ("x", "rho"))
        ax.plot(data["x"], data["rho"], "k--", linewidth=0.9,
                label="fine-grid reference")
    if window is not None:
        ax.set_xlim(*window)
    ax.set_xlabel("x")
    ax.set_ylabel(r"$\rho$")
    return len(paths)


def _render_fig3a(input_dir: str, ax) -> int:
    count = _render_fig3(input_dir, ax)
    ax.set_title("Density profiles")
    return count


def _render_fig3b(input_dir: str, ax) -> int:
    count = _render_fig3(input_dir, ax, window=SLOW_SHOCK_ZOOM)
    ax.set_title("Slow-shock zoom")
    return count


_RENDERERS = {
    "fig1": _render_fig1,
    "fig2a": _render_fig2a,
    "fig2b": _render_fig2b,
    "fig3a": _render_fig3a,
    "fig3b": _render_fig3b,
}
