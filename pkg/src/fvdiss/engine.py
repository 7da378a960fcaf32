"""Uniform-grid 1D finite-volume driver.

Explicit first-order update

    U_i^{n+1} = U_i^n - (dt/dx) (f_hat_{i+1/2} - f_hat_{i-1/2})

with one ghost cell per side (transmissive copy or periodic wrap), a CFL
time-step controller, and conservation accounting via the boundary-flux
integral carried in the run result.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dissipation import Diagnostics, SolverSpec
from .errors import InvalidStateError, NumericFailureError
from .flux import BOUNDS_MODES, DIFF_MODES, interface_fluxes
from .models import Model

BC_MODES = ("transmissive", "periodic")

#: slack applied to CFL-cap comparisons and to the end-of-run time test
_TIME_SLACK = 1e-12


@dataclass(frozen=True)
class Grid:
    """Uniform subdivision of [x_lo, x_hi] into n_cells cells."""

    x_lo: float
    x_hi: float
    n_cells: int

    def __post_init__(self):
        if self.n_cells < 1:
            raise ValueError(f"need at least one cell, got {self.n_cells}")
        if not self.x_lo < self.x_hi:
            raise ValueError(f"empty domain [{self.x_lo}, {self.x_hi}]")

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / self.n_cells

    @property
    def cell_centers(self) -> np.ndarray:
        return self.x_lo + (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def interfaces(self) -> np.ndarray:
        return np.linspace(self.x_lo, self.x_hi, self.n_cells + 1)


@dataclass
class FieldSnapshot:
    """Cell averages at one time level; shape (n_cells, n_vars)."""

    t: float
    cell_averages: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.cell_averages, dtype=float)
        if u.ndim == 1:
            u = u[:, None]
        if not np.all(np.isfinite(u)):
            raise ValueError(f"non-finite cell averages at t={self.t}")
        self.cell_averages = u


@dataclass(frozen=True)
class RunConfig:
    """Time-integration settings; fixed_dt=None selects CFL-derived steps."""

    solver: SolverSpec
    t_end: float
    cfl: float = 0.5
    fixed_dt: Optional[float] = None
    bc: str = "transmissive"
    bounds_mode: str = "left_right"
    diff_mode: str = "central"

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.t_end < 0.0:
            raise ValueError(f"t_end must be nonnegative, got {self.t_end}")
        if self.fixed_dt is not None and self.fixed_dt <= 0.0:
            raise ValueError(f"fixed_dt must be positive, got {self.fixed_dt}")
        if self.bc not in BC_MODES:
            raise ValueError(f"bc must be one of {BC_MODES}, got {self.bc!r}")
        if self.bounds_mode not in BOUNDS_MODES:
            raise ValueError(f"bounds_mode must be one of {BOUNDS_MODES}, got {self.bounds_mode!r}")
        if self.diff_mode not in DIFF_MODES:
            raise ValueError(f"diff_mode must be one of {DIFF_MODES}, got {self.diff_mode!r}")


@dataclass
class RunResult:
    final: FieldSnapshot
    n_steps: int
    #: integral over time of (f_hat at right boundary - f_hat at left boundary)
    boundary_flux_integral: np.ndarray
    diagnostics: Diagnostics
    wall_time: float
    #: largest max|lambda| dt/dx observed across steps
    max_courant: float = 0.0


def _ghost_extend(U: np.ndarray, bc: str) -> np.ndarray:
    if bc == "transmissive":
        return np.concatenate([U[:1], U, U[-1:]], axis=0)
    if bc == "periodic":
        return np.concatenate([U[-1:], U, U[:1]], axis=0)
    raise ValueError(f"bc must be one of {BC_MODES}, got {bc!r}")


def _max_abs_speed(model: Model, snapshot: FieldSnapshot) -> float:
    s_min, s_max = model.min_max_speeds(snapshot.cell_averages)
    return float(np.max(np.maximum(np.abs(s_min), np.abs(s_max))))


def compute_dt(model: Model, snapshot: FieldSnapshot, grid: Grid, cfl: float,
               t_end: Optional[float] = None) -> float:
    """CFL time step cfl * dx / max|lambda|, truncated to land on t_end."""
    lam = _max_abs_speed(model, snapshot)
    if lam == 0.0:
        raise NumericFailureError("zero maximum wave speed; nothing to advance")
    dt = cfl * grid.dx / lam
    if t_end is not None:
        dt = min(dt, t_end - snapshot.t)
    return dt


def _advance(model, solver, snapshot, grid, dt, bc, *, bounds_mode="left_right",
             diff_mode="central", diagnostics=None):
    """One explicit update; returns (snapshot, left/right boundary fluxes)."""
    U = snapshot.cell_averages
    u_ext = _ghost_extend(U, bc)
    r = dt / grid.dx
    f_hat = interface_fluxes(model, solver, u_ext, r, bounds_mode=bounds_mode,
                             diff_mode=diff_mode, diagnostics=diagnostics)
    U_new = U - r * (f_hat[1:] - f_hat[:-1])
    return FieldSnapshot(snapshot.t + dt, U_new), f_hat[0], f_hat[-1]


def step(model: Model, solver: SolverSpec, snapshot: FieldSnapshot, grid: Grid,
         dt: float, bc: str, *, bounds_mode: str = "left_right",
         diff_mode: str = "central",
         diagnostics: Diagnostics | None = None) -> FieldSnapshot:
    """One explicit update with the hard stability cap max|nu| <= 1 enforced."""
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    nu_max = _max_abs_speed(model, snapshot) * dt / grid.dx
    if nu_max > 1.0 + _TIME_SLACK:
        raise NumericFailureError(f"dt={dt} violates the stability cap: max nu = {nu_max:.4f} > 1")
    out, _, _ = _advance(model, solver, snapshot, grid, dt, bc,
                         bounds_mode=bounds_mode, diff_mode=diff_mode,
                         diagnostics=diagnostics)
    return out


def run(model: Model, config: RunConfig, grid: Grid, initial: FieldSnapshot,
        observers=()) -> RunResult:
    """Advance `initial` to config.t_end.

    Observers are called after every step as observer(step_index, t,
    snapshot), step_index starting at 1.  With fixed_dt the configured CFL
    number acts as a validated cap at every step.
    """
    if initial.cell_averages.shape != (grid.n_cells, model.n_vars):
        raise ValueError(
            f"initial shape {initial.cell_averages.shape} does not match "
            f"(n_cells, n_vars) = ({grid.n_cells}, {model.n_vars})")
    started = time.perf_counter()
    diagnostics = Diagnostics()
    snapshot = initial
    flux_integral = np.zeros(model.n_vars)
    n_steps = 0
    max_courant = 0.0
    t_slack = _TIME_SLACK * max(1.0, abs(config.t_end))
    while snapshot.t < config.t_end - t_slack:
        lam = _max_abs_speed(model, snapshot)
        if config.fixed_dt is None:
            if lam == 0.0:
                raise NumericFailureError("zero maximum wave speed; nothing to advance")
            dt = min(config.cfl * grid.dx / lam, config.t_end - snapshot.t)
        else:
            dt = min(config.fixed_dt, config.t_end - snapshot.t)
        nu_max = lam * dt / grid.dx
        if nu_max > config.cfl + _TIME_SLACK:
            raise NumericFailureError(
                f"fixed dt={config.fixed_dt} violates the CFL cap at step "
                f"{n_steps + 1}: max nu = {nu_max:.4f} > cfl = {config.cfl}")
        max_courant = max(max_courant, nu_max)
        try:
            snapshot, f_lo, f_hi = _advance(
                model, config.solver, snapshot, grid, dt, config.bc,
                bounds_mode=config.bounds_mode, diff_mode=config.diff_mode,
                diagnostics=diagnostics)
        except (NumericFailureError, InvalidStateError) as err:
            raise type(err)(f"step {n_steps + 1} (t={snapshot.t:.6g}) failed: {err}") from err
        flux_integral += dt * (f_hi - f_lo)
        n_steps += 1
        for observer in observers:
            observer(n_steps, snapshot.t, snapshot)
    return RunResult(final=snapshot, n_steps=n_steps,
                     boundary_flux_integral=flux_integral,
                     diagnostics=diagnostics,
                     wall_time=time.perf_counter() - started,
                     max_courant=max_courant)


def total_conserved(snapshot: FieldSnapshot, grid: Grid) -> np.ndarray:
    """Per-component integral sum_i U_i dx."""
    return snapshot.cell_averages.sum(axis=0) * grid.dx


class MaxTracker:
    """Observer recording (step, t, max of one component) after every step.

    With absolute=True the tracked value is max|u|, which is the right
    oscillation gauge when over/undershoots can develop on either side of
    the data range.
    """

    def __init__(self, component: int = 0, absolute: bool = False):
        self.component = component
        self.absolute = absolute
        self.rows: list[tuple[int, float, float]] = []

    def __call__(self, step_index, t, snapshot):
        values = snapshot.cell_averages[:, self.component]
        if self.absolute:
            values = np.abs(values)
        self.rows.append((step_index, t, float(values.max())))


class ConservationTracker:
    """Observer recording (step, t, total_conserved) after every step."""

    def __init__(self, grid: Grid):
        self.grid = grid
        self.rows: list[tuple[int, float, np.ndarray]] = []

    def __call__(self, step_index, t, snapshot):
        self.rows.append((step_index, t, total_conserved(snapshot, self.grid)))
