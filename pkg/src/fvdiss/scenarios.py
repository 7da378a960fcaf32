"""Benchmark scenarios and CSV emission.

Two experiments are packaged here: the sign(x) transport study that probes
how the omega blend trades monotonicity for sharpness, and the ideal-MHD
Riemann problem on [-4, 4] that compares the hybrid solver family against
HLL.  Both return plain result records; writing files is kept separate so
sweeps can run on a worker pool and emit per-run outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dissipation import SolverKind, SolverSpec
from .engine import (
    FieldSnapshot,
    Grid,
    MaxTracker,
    RunConfig,
    run,
    total_conserved,
)
from .errors import InvalidStateError, NumericFailureError
from .models import mhd_cons_to_prim, mhd_model, mhd_prim_to_cons

SCALAR_DOMAIN = (-1.0, 1.0)
MHD_DOMAIN = (-4.0, 4.0)

#: Riemann data of the MHD benchmark: (rho, vx, vy, vz, p, By, Bz)
MHD_LEFT = dict(rho=3.0, vx=0.0, vy=0.0, vz=0.0, p=3.0, By=1.0, Bz=1.0)
MHD_RIGHT = dict(rho=1.0, vx=0.0, vy=0.0, vz=0.0, p=1.0,
                 By=float(np.cos(1.5)), Bz=float(np.sin(1.5)))

MHD_PROFILE_COLUMNS = ("x", "rho", "vx", "vy", "vz", "By", "Bz", "E", "p")


@dataclass
class ScenarioResult:
    """Final profile plus per-step maximum series for one (solver, omega) run."""

    label: str
    solver: SolverSpec
    grid: Grid
    x: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None
    timeseries: list = field(default_factory=list)
    n_steps: int = 0
    dt: Optional[float] = None
    wall_time: float = 0.0
    conservation_change: Optional[np.ndarray] = None
    boundary_flux_integral: Optional[np.ndarray] = None
    degenerate_fallbacks: int = 0
    max_courant: float = 0.0
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def config_summary(self) -> str:
        parts = [f"solver={self.solver.kind.value}", f"omega={self.solver.omega:g}",
                 f"cells={self.grid.n_cells}",
                 f"domain=[{self.grid.x_lo:g},{self.grid.x_hi:g}]",
                 f"steps={self.n_steps}"]
        if self.dt is not None:
            parts.append(f"dt={self.dt:g}")
        if self.error is not None:
            parts.append(f"error={self.error!r}")
        return " ".join(parts)


def sign_initial(grid: Grid) -> FieldSnapshot:
    """Exact cell averages of sign(x); straddling cells get (lo+hi)/(hi-lo)."""
    edges = grid.interfaces
    lo, hi = edges[:-1], edges[1:]
    avg = np.where(hi <= 0.0, -1.0, np.where(lo >= 0.0, 1.0, (lo + hi) / (hi - lo)))
    return FieldSnapshot(0.0, avg[:, None])


def mhd_riemann_initial(grid: Grid, gamma: float) -> FieldSnapshot:
    """Exact cell averages of the piecewise-constant Riemann data (jump at 0)."""
    from .models import MhdPrimitive

    u_left = mhd_prim_to_cons(MhdPrimitive(**MHD_LEFT), gamma)
    u_right = mhd_prim_to_cons(MhdPrimitive(**MHD_RIGHT), gamma)
    edges = grid.interfaces
    lo, hi = edges[:-1], edges[1:]
    # fraction of each cell lying left of the jump
    frac = np.clip(-lo, 0.0, hi - lo) / (hi - lo)
    U = frac[:, None] * u_left + (1.0 - frac[:, None]) * u_right
    return FieldSnapshot(0.0, U)


def run_scalar_sign_test(omegas, n_cells: int = 200, cfl: float = 0.5,
                         t_end: float = 0.25, *, speed: float = 1.0,
                         bounds_mode: str = "left_right") -> list[ScenarioResult]:
    """Transport of sign(x) on [-1, 1] with the upwind/Lax-Wendroff blend.

    One run per omega.  The timeseries records max|u| including the initial
    state as step 0; with this orientation the dispersive oscillations
    develop at the u = -1 plateau, so a plain maximum would miss them.
    """
    from .models import advection_model

    model = advection_model(speed)
    grid = Grid(*SCALAR_DOMAIN, n_cells)
    results = []
    for omega in omegas:
        solver = SolverSpec(SolverKind.D_OMEGA, omega=float(omega))
        initial = sign_initial(grid)
        tracker = MaxTracker(absolute=True)
        config = RunConfig(solver=solver, t_end=t_end, cfl=cfl,
                           bounds_mode=bounds_mode)
        res = run(model, config, grid, initial, observers=[tracker])
        initial_max = float(np.abs(initial.cell_averages[:, 0]).max())
        results.append(ScenarioResult(
            label=f"w{omega:.2f}",
            solver=solver,
            grid=grid,
            x=grid.cell_centers,
            values=res.final.cell_averages,
            timeseries=[(0, 0.0, initial_max)] + tracker.rows,
            n_steps=res.n_steps,
            dt=None,
            wall_time=res.wall_time,
            conservation_change=total_conserved(res.final, grid) - total_conserved(initial, grid),
            boundary_flux_integral=res.boundary_flux_integral,
            degenerate_fallbacks=res.diagnostics.degenerate_fallbacks,
        ))
    return results


@dataclass
class MhdRiemannResult:
    results: list[ScenarioResult]
    reference: Optional[ScenarioResult] = None
    #: L1 distance of each solver's density profile to the fine-grid reference
    l1_density_distance: dict = field(default_factory=dict)


def run_mhd_riemann(solvers, n_cells: int = 300, dt: float = 0.01,
                    t_end: float = 1.0, Bx: float = 1.5,
                    gamma: float = 5.0 / 3.0, *, cfl: float = 0.9,
                    bounds_mode: str = "left_right",
                    reference_cells: int = 0) -> MhdRiemannResult:
    """MHD Riemann sweep on [-4, 4] with a fixed time step.

    The nominal CFL number describes the configuration (it holds at t=0 and
    drives the adaptive reference run); the fixed-step runs are validated
    against the hard stability bound max|nu| <= 1, because the developing
    shocks push the peak Courant number a few percent past the nominal
    value mid-run.  A failing solver aborts only its own run; its result
    carries the error message.  With reference_cells > 0 an HLL run on that
    grid (CFL-driven steps) provides a self-convergence reference and
    per-solver L1 density distances.
    """
    model = mhd_model(Bx, gamma)
    grid = Grid(*MHD_DOMAIN, n_cells)
    results = []
    for solver in solvers:
        results.append(_one_mhd_run(model, solver, grid, gamma,
                                    RunConfig(solver=solver, t_end=t_end, cfl=1.0,
                                              fixed_dt=dt, bounds_mode=bounds_mode)))
    out = MhdRiemannResult(results=results)
    if reference_cells:
        ref_grid = Grid(*MHD_DOMAIN, reference_cells)
        ref_solver = SolverSpec(SolverKind.HLL)
        out.reference = _one_mhd_run(model, ref_solver, ref_grid, gamma,
                                     RunConfig(solver=ref_solver, t_end=t_end,
                                               cfl=cfl, bounds_mode=bounds_mode))
        out.reference.label = "reference"
        if out.reference.ok:
            for res in results:
                if res.ok:
                    out.l1_density_distance[res.label] = l1_distance_to_fine(
                        res.grid, res.values[:, 0],
                        ref_grid, out.reference.values[:, 0])
    return out


def _one_mhd_run(model, solver, grid, gamma, config) -> ScenarioResult:
    initial = mhd_riemann_initial(grid, gamma)
    result = ScenarioResult(label=solver.label, solver=solver, grid=grid,
                            dt=config.fixed_dt)
    try:
        res = run(model, config, grid, initial)
        mhd_cons_to_prim(res.final.cell_averages, gamma)  # positivity assertion
    except (NumericFailureError, InvalidStateError) as err:
        result.error = str(err)
        return result
    result.x = grid.cell_centers
    result.values = res.final.cell_averages
    result.n_steps = res.n_steps
    result.wall_time = res.wall_time
    result.conservation_change = (total_conserved(res.final, grid)
                                  - total_conserved(initial, grid))
    result.boundary_flux_integral = res.boundary_flux_integral
    result.degenerate_fallbacks = res.diagnostics.degenerate_fallbacks
    result.max_courant = res.max_courant
    return result


def resample_piecewise_constant(fine_grid: Grid, fine_values, coarse_grid: Grid):
    """Exact coarse-cell averages of a piecewise-constant fine profile."""
    fine_edges = fine_grid.interfaces
    cumulative = np.concatenate([[0.0], np.cumsum(fine_values * fine_grid.dx)])
    at_coarse = np.interp(coarse_grid.interfaces, fine_edges, cumulative)
    return np.diff(at_coarse) / coarse_grid.dx


def l1_distance_to_fine(coarse_grid: Grid, coarse_values, fine_grid: Grid,
                        fine_values) -> float:
    resampled = resample_piecewise_constant(fine_grid, fine_values, coarse_grid)
    return float(np.sum(np.abs(coarse_values - resampled)) * coarse_grid.dx)


def slow_shock_steepness(x, values, window=(1.0, 1.6)) -> float:
    """max |d value / dx| over cell pairs whose centers both lie in `window`."""
    x = np.asarray(x, dtype=float)
    values = np.asarray(values, dtype=float)
    inside = (x >= window[0]) & (x <= window[1])
    pair = inside[:-1] & inside[1:]
    if not np.any(pair):
        raise ValueError(f"no cell pairs inside window {window}")
    slopes = np.abs(np.diff(values) / np.diff(x))
    return float(slopes[pair].max())


# ---------------------------------------------------------------------------
# CSV emission (17 significant digits, fixed layout, deterministic)
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    return f"{float(value):.17g}"


def write_profile_csv(path, x, values, var_names) -> None:
    values = np.atleast_2d(np.asarray(values, dtype=float))
    if values.shape[0] != np.asarray(x).size:
        values = values.T
    with open(path, "w", newline="") as handle:
        handle.write("x," + ",".join(var_names) + "\n")
        for xi, row in zip(x, values):
            handle.write(",".join([_fmt(xi)] + [_fmt(v) for v in row]) + "\n")


def write_mhd_profile_csv(path, x, conserved, gamma) -> None:
    w = mhd_cons_to_prim(conserved, gamma)
    table = np.column_stack([w.rho, w.vx, w.vy, w.vz, w.By, w.Bz,
                             np.asarray(conserved)[:, 6], w.p])
    write_profile_csv(path, x, table, MHD_PROFILE_COLUMNS[1:])


def write_timeseries_csv(path, rows) -> None:
    with open(path, "w", newline="") as handle:
        handle.write("step,t,max_u\n")
        for step_index, t, value in rows:
            handle.write(f"{step_index},{_fmt(t)},{_fmt(value)}\n")


def write_dissipation_csv(path, rows) -> None:
    with open(path, "w", newline="") as handle:
        handle.write("kind,omega,nu,d\n")
        for kind, omega, nu, d in rows:
            handle.write(f"{kind},{_fmt(omega)},{_fmt(nu)},{_fmt(d)}\n")
