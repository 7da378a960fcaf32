"""Command-line front end.

Subcommands: sample-dissipation, run-scalar, run-mhd, sweep-omega.  Options
can come from a flat key=value config file (--config); explicit flags win.
Exit codes: 0 success, 1 numeric failure, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .dissipation import NuBounds, SolverSpec, sample_dissipation
from .errors import ConfigError, FvdissError, InvalidStateError, NumericFailureError
from .scenarios import (
    run_mhd_riemann,
    run_scalar_sign_test,
    write_dissipation_csv,
    write_mhd_profile_csv,
    write_profile_csv,
    write_timeseries_csv,
)

#: default curve set for the dissipation-function sampler (7 curves)
DEFAULT_SAMPLE_SOLVERS = ("upwind", "rusanov", "hll", "lax_wendroff",
                          "p2", "d_omega:0.3", "p2_omega:0.3")
DEFAULT_SAMPLE_BOUNDS = (-0.4, 0.9)
DEFAULT_SAMPLE_RANGE = (-1.0, 1.0)
DEFAULT_SAMPLE_COUNT = 201

DEFAULT_SCALAR_OMEGAS = (0.0, 0.4, 1.0)
DEFAULT_SWEEP_SCALAR_OMEGAS = tuple(round(0.1 * k, 1) for k in range(11))
DEFAULT_SWEEP_MHD_OMEGAS = (0.3, 0.5)
DEFAULT_MHD_SOLVERS = ("hll", "p2", "p2_omega:0.3", "p2_omega:0.5")


def _parse_solvers(tokens) -> list[SolverSpec]:
    try:
        return [SolverSpec.parse(tok) for tok in tokens]
    except ValueError as err:
        raise ConfigError(str(err))


def _parse_omegas(tokens) -> list[float]:
    try:
        values = [float(tok) for tok in tokens]
    except ValueError as err:
        raise ConfigError(f"bad omega value: {err}")
    for w in values:
        if not 0.0 <= w <= 1.0:
            raise ConfigError(f"omega must lie in [0, 1], got {w}")
    return values


def load_config_file(path: str) -> dict:
    """Flat key = value file; '#' starts a comment, commas separate lists."""
    values = {}
    try:
        with open(path) as handle:
            for lineno, raw in enumerate(handle, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
                key, _, value = line.partition("=")
                values[key.strip().lower().replace("-", "_")] = value.strip()
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}")
    return values


def _split_list(text: str) -> list[str]:
    return [tok.strip() for tok in text.split(",") if tok.strip()]


class _Resolver:
    """Merge CLI flags (highest), config file, and built-in defaults."""

    def __init__(self, args: argparse.Namespace, known_keys):
        self.args = args
        self.file_values = load_config_file(args.config) if args.config else {}
        unknown = set(self.file_values) - set(known_keys)
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")

    def get(self, key, default, convert=None):
        cli_value = getattr(self.args, key, None)
        if cli_value is not None:
            return cli_value
        if key in self.file_values:
            raw = self.file_values[key]
            try:
                return convert(raw) if convert else raw
            except ConfigError:
                raise
            except ValueError as err:
                raise ConfigError(f"bad value for {key!r}: {err}")
        return default


def _ensure_out_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def _write_manifest(out_dir: str, entries) -> None:
    with open(os.path.join(out_dir, "manifest.txt"), "w") as handle:
        for filename, summary in entries:
            handle.write(f"{filename}\t{summary}\n")


def _write_scalar_result(result, out_dir: str):
    base = f"scalar_{result.label}"
    profile = f"{base}_profile.csv"
    series = f"{base}_timeseries.csv"
    write_profile_csv(os.path.join(out_dir, profile), result.x, result.values, ("u",))
    write_timeseries_csv(os.path.join(out_dir, series), result.timeseries)
    return [(profile, result.config_summary()), (series, result.config_summary())]


def _write_mhd_result(result, out_dir: str, gamma: float):
    name = f"mhd_{result.label}_profile.csv"
    write_mhd_profile_csv(os.path.join(out_dir, name), result.x, result.values, gamma)
    return [(name, result.config_summary())]


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

_SAMPLE_KEYS = ("solver", "nu_min", "nu_max", "nu_lo", "nu_hi", "samples",
                "out", "out_dir")


def cmd_sample_dissipation(args) -> int:
    cfg = _Resolver(args, _SAMPLE_KEYS)
    solvers = cfg.get("solver", list(DEFAULT_SAMPLE_SOLVERS), _split_list)
    specs = _parse_solvers(solvers)
    nu_min = cfg.get("nu_min", DEFAULT_SAMPLE_BOUNDS[0], float)
    nu_max = cfg.get("nu_max", DEFAULT_SAMPLE_BOUNDS[1], float)
    nu_lo = cfg.get("nu_lo", DEFAULT_SAMPLE_RANGE[0], float)
    nu_hi = cfg.get("nu_hi", DEFAULT_SAMPLE_RANGE[1], float)
    samples = cfg.get("samples", DEFAULT_SAMPLE_COUNT, int)
    out_dir = _ensure_out_dir(cfg.get("out_dir", "out"))
    out = cfg.get("out", os.path.join(out_dir, "dissipation_samples.csv"))
    try:
        bounds = NuBounds(nu_min, nu_max)
        rows = sample_dissipation(specs, bounds, nu_lo, nu_hi, samples)
    except ValueError as err:
        raise ConfigError(str(err))
    try:
        write_dissipation_csv(out, rows)
    except OSError as err:
        raise NumericFailureError(f"cannot write {out}: {err}")
    summary = (f"solvers={','.join(s.label for s in specs)} "
               f"bounds=({nu_min:g},{nu_max:g}) range=({nu_lo:g},{nu_hi:g}) "
               f"samples={samples}")
    _write_manifest(out_dir, [(os.path.basename(out), summary)])
    print(f"wrote {len(rows)} rows to {out}")
    return 0


_SCALAR_KEYS = ("omega", "cells", "cfl", "t_end", "bounds_mode", "out_dir")


def cmd_run_scalar(args) -> int:
    cfg = _Resolver(args, _SCALAR_KEYS)
    omegas = _parse_omegas(cfg.get("omega", list(DEFAULT_SCALAR_OMEGAS), _split_list))
    cells = cfg.get("cells", 200, int)
    cfl = cfg.get("cfl", 0.5, float)
    t_end = cfg.get("t_end", 0.25, float)
    bounds_mode = cfg.get("bounds_mode", "left_right")
    out_dir = _ensure_out_dir(cfg.get("out_dir", "out"))
    results = run_scalar_sign_test(omegas, n_cells=cells, cfl=cfl, t_end=t_end,
                                   bounds_mode=bounds_mode)
    entries = []
    for result in results:
        entries.extend(_write_scalar_result(result, out_dir))
        print(f"omega={result.solver.omega:g}: {result.n_steps} steps, "
              f"final max |u| = {result.timeseries[-1][2]:.6f}")
    _write_manifest(out_dir, entries)
    return 0


_MHD_KEYS = ("solver", "cells", "dt", "t_end", "bx", "gamma", "cfl",
             "reference_cells", "bounds_mode", "out_dir")


def cmd_run_mhd(args) -> int:
    cfg = _Resolver(args, _MHD_KEYS)
    solvers = _parse_solvers(cfg.get("solver", list(DEFAULT_MHD_SOLVERS), _split_list))
    cells = cfg.get("cells", 300, int)
    dt = cfg.get("dt", 0.01, float)
    t_end = cfg.get("t_end", 1.0, float)
    bx = cfg.get("bx", 1.5, float)
    gamma = cfg.get("gamma", 5.0 / 3.0, float)
    cfl = cfg.get("cfl", 0.9, float)
    reference_cells = cfg.get("reference_cells", 0, int)
    bounds_mode = cfg.get("bounds_mode", "left_right")
    out_dir = _ensure_out_dir(cfg.get("out_dir", "out"))
    sweep = run_mhd_riemann(solvers, n_cells=cells, dt=dt, t_end=t_end, Bx=bx,
                            gamma=gamma, cfl=cfl, bounds_mode=bounds_mode,
                            reference_cells=reference_cells)
    entries = []
    failed = 0
    for result in sweep.results:
        if not result.ok:
            failed += 1
            print(f"{result.label}: FAILED: {result.error}", file=sys.stderr)
            continue
        entries.extend(_write_mhd_result(result, out_dir, gamma))
        line = f"{result.label}: {result.n_steps} steps"
        if result.label in sweep.l1_density_distance:
            line += f", L1(rho) to reference = {sweep.l1_density_distance[result.label]:.5f}"
        print(line)
    if sweep.reference is not None and sweep.reference.ok:
        entries.extend(_write_mhd_result(sweep.reference, out_dir, gamma))
    _write_manifest(out_dir, entries)
    return 1 if failed else 0


_SWEEP_KEYS = ("scenario", "omega", "jobs", "cells", "cfl", "dt", "t_end",
               "bx", "gamma", "bounds_mode", "out_dir")


def cmd_sweep_omega(args) -> int:
    cfg = _Resolver(args, _SWEEP_KEYS)
    scenario = cfg.get("scenario", "scalar")
    if scenario not in ("scalar", "mhd"):
        raise ConfigError(f"scenario must be 'scalar' or 'mhd', got {scenario!r}")
    default_omegas = (DEFAULT_SWEEP_SCALAR_OMEGAS if scenario == "scalar"
                      else DEFAULT_SWEEP_MHD_OMEGAS)
    omegas = _parse_omegas(cfg.get("omega", list(default_omegas), _split_list))
    jobs = cfg.get("jobs", min(4, os.cpu_count() or 1), int)
    bounds_mode = cfg.get("bounds_mode", "left_right")
    out_dir = _ensure_out_dir(cfg.get("out_dir", "out"))

    if scenario == "scalar":
        cells = cfg.get("cells", 200, int)
        cfl = cfg.get("cfl", 0.5, float)
        t_end = cfg.get("t_end", 0.25, float)

        def worker(omega):
            result = run_scalar_sign_test([omega], n_cells=cells, cfl=cfl,
                                          t_end=t_end, bounds_mode=bounds_mode)[0]
            return result, _write_scalar_result(result, out_dir)
    else:
        cells = cfg.get("cells", 300, int)
        dt = cfg.get("dt", 0.01, float)
        t_end = cfg.get("t_end", 1.0, float)
        bx = cfg.get("bx", 1.5, float)
        gamma = cfg.get("gamma", 5.0 / 3.0, float)
        cfl = cfg.get("cfl", 0.9, float)

        def worker(omega):
            solver = SolverSpec.parse(f"p2_omega:{omega}")
            result = run_mhd_riemann([solver], n_cells=cells, dt=dt, t_end=t_end,
                                     Bx=bx, gamma=gamma, cfl=cfl,
                                     bounds_mode=bounds_mode).results[0]
            files = _write_mhd_result(result, out_dir, gamma) if result.ok else []
            return result, files

    entries = []
    failed = 0
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        for result, files in pool.map(worker, omegas):
            entries.extend(files)
            if result.ok:
                print(f"omega={result.solver.omega:g}: {result.n_steps} steps")
            else:
                failed += 1
                print(f"omega={result.solver.omega:g}: FAILED: {result.error}",
                      file=sys.stderr)
    _write_manifest(out_dir, entries)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(sub):
    sub.add_argument("--config", help="flat key=value config file; flags win")
    sub.add_argument("--out-dir", dest="out_dir", help="output directory (default: out)")
    sub.add_argument("--bounds-mode", dest="bounds_mode",
                     choices=("left_right", "both_states"),
                     help="wave-speed bound estimate per interface")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fvdiss",
        description="1D finite-volume runs with dissipation-function solvers")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("sample-dissipation",
                            help="tabulate d(nu) curves to CSV")
    p.add_argument("--solver", action="append",
                   help="solver kind[:omega]; repeatable (default: 7-curve set)")
    p.add_argument("--nu-min", dest="nu_min", type=float, help="lower wave bound")
    p.add_argument("--nu-max", dest="nu_max", type=float, help="upper wave bound")
    p.add_argument("--nu-lo", dest="nu_lo", type=float, help="sampling range start")
    p.add_argument("--nu-hi", dest="nu_hi", type=float, help="sampling range end")
    p.add_argument("--samples", type=int, help="number of nu samples")
    p.add_argument("--out", help="output CSV path")
    _add_common(p)
    p.set_defaults(func=cmd_sample_dissipation)

    p = commands.add_parser("run-scalar", help="sign(x) transport study")
    p.add_argument("--omega", action="append", help="blend weight; repeatable")
    p.add_argument("--cells", type=int, help="grid cells (default 200)")
    p.add_argument("--cfl", type=float, help="Courant number (default 0.5)")
    p.add_argument("--t-end", dest="t_end", type=float, help="end time (default 0.25)")
    _add_common(p)
    p.set_defaults(func=cmd_run_scalar)

    p = commands.add_parser("run-mhd", help="ideal-MHD Riemann problem")
    p.add_argument("--solver", action="append",
                   help="solver kind[:omega]; repeatable "
                        "(default: hll p2 p2_omega:0.3 p2_omega:0.5)")
    p.add_argument("--cells", type=int, help="grid cells (default 300)")
    p.add_argument("--dt", type=float, help="fixed time step (default 0.01)")
    p.add_argument("--t-end", dest="t_end", type=float, help="end time (default 1.0)")
    p.add_argument("--bx", type=float, help="normal magnetic field (default 1.5)")
    p.add_argument("--gamma", type=float, help="adiabatic constant (default 5/3)")
    p.add_argument("--cfl", type=float, help="CFL cap for the fixed step (default 0.9)")
    p.add_argument("--reference-cells", dest="reference_cells", type=int,
                   help="fine-grid HLL self-reference resolution (0 = off)")
    _add_common(p)
    p.set_defaults(func=cmd_run_mhd)

    p = commands.add_parser("sweep-omega", help="omega sweep on a worker pool")
    p.add_argument("--scenario", choices=("scalar", "mhd"),
                   help="which experiment to sweep (default scalar)")
    p.add_argument("--omega", action="append", help="omega grid; repeatable")
    p.add_argument("--jobs", type=int, help="worker threads")
    p.add_argument("--cells", type=int)
    p.add_argument("--cfl", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--bx", type=float)
    p.add_argument("--gamma", type=float)
    _add_common(p)
    p.set_defaults(func=cmd_sweep_omega)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (NumericFailureError, InvalidStateError) as err:
        print(f"numeric failure: {err}", file=sys.stderr)
        return 1
    except FvdissError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
