"""Command-line front end.

Subcommands: simulate, density, levy, tails, solve, validate. Every run is
driven by a flat key = value config file plus a few overriding flags, and
every artifact gets a JSON sidecar carrying the config hash and seed, so a
rerun with the same sidecar reproduces the file byte for byte.

Exit codes: 0 success, 1 runtime or numerical failure, 2 config rejection.
"""
import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .acceptance import run_acceptance
from .config import (
    _get,
    _number,
    _positive_int,
    build_param_curves,
    config_hash,
    effective_config,
    simulation_grid,
)
from .errors import ConfigError, DomainError, GeoStableError
from .levy import make_levy_density
from .propagator import GridFunction, bump, gaussian_pulse, increment_density, propagate
from .sampling import (
    RngStream,
    SamplePaths,
    gamma_inhom_sample,
    gs1_sample,
    gs2_sample,
    multistable_sample,
    save_paths,
    vg_inhom_sample,
)
from .symbols import (
    symbol_gamma_inhom,
    symbol_gs1,
    symbol_gs2,
    symbol_multistable,
    symbol_vg_inhom,
)
from .transform import SpectralGrid, make_tail_report, tail_asymptote_gs1

_VG_MODES = ("brownian_subordination", "gamma_difference")


def _symbol_for(process, curves):
    if process in ("stable", "multistable"):
        return symbol_multistable(curves)
    if process in ("gs_homog", "gs2"):
        return symbol_gs2(curves)
    if process == "gs1":
        return symbol_gs1(curves)
    if process == "gamma_inhom":
        return symbol_gamma_inhom(curves.b)
    if process == "vg_inhom":
        return symbol_vg_inhom(curves.b)
    raise ConfigError(f"no symbol for process {process!r}")


def _vg_mode(cfg):
    mode = _get(cfg, "mode", _VG_MODES[0])
    if mode not in _VG_MODES:
        raise ConfigError(f"mode must be one of {_VG_MODES}")
    return mode


def _chunk_sizes(n, k=8):
    base, extra = divmod(n, k)
    return tuple(base + (i < extra) for i in range(k) if base + (i < extra) > 0)


def _simulate_paths(process, curves, cfg, grid):
    """Sample n_paths in 8 fixed chunks so results do not depend on the
    thread count."""
    n = _positive_int(cfg, "n_paths", 1000)
    mode = _vg_mode(cfg) if process == "vg_inhom" else None
    base = RngStream(seed=cfg["seed"], stream_id=0)
    sizes = _chunk_sizes(n)

    def run(i):
        rng = base.child(i)
        if process in ("stable", "multistable"):
            return multistable_sample(curves, grid, sizes[i], rng)
        if process in ("gs_homog", "gs2"):
            return gs2_sample(curves, grid, sizes[i], rng)
        if process == "gs1":
            return gs1_sample(curves, grid, sizes[i], rng)
        if process == "gamma_inhom":
            return gamma_inhom_sample(curves, grid, sizes[i], rng)
        return vg_inhom_sample(curves.b, grid, sizes[i], rng, mode=mode)

    with ThreadPoolExecutor(max_workers=cfg["threads"]) as ex:
        parts = list(ex.map(run, range(len(sizes))))
    return SamplePaths(
        grid=parts[0].grid,
        values=np.vstack([p.values for p in parts]),
        seed=cfg["seed"],
        stream_id=base.stream_id,
        scheme=parts[0].scheme,
        step=parts[0].step,
        params=parts[0].params,
    )


def _base_meta(cfg, command, data_file):
    return {
        "command": command,
        "config_hash": config_hash(cfg),
        "seed": cfg["seed"],
        "data_file": os.path.basename(data_file),
    }


def _write_table(basepath, names, columns, meta):
    datafile = basepath + ".csv"
    arr = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    np.savetxt(datafile, arr, delimiter=",", fmt="%.17g",
               header=",".join(names), comments="# ")
    meta = dict(meta, columns=list(names))
    with open(basepath + ".json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return datafile


def _spectral_grid(cfg):
    n = _positive_int(cfg, "grid_n", 4096)
    extent = _number(cfg, "grid_extent", 40.0)
    return SpectralGrid(n=n, x_extent=extent)


def cmd_simulate(cfg):
    process, curves = build_param_curves(cfg)
    grid, idx = simulation_grid(cfg, curves.t_max)
    paths = _simulate_paths(process, curves, cfg, grid)
    basepath = os.path.join(cfg["out_dir"], f"{process}_paths")
    extra = {
        "command": "simulate",
        "config_hash": config_hash(cfg),
        "n_paths": int(paths.values.shape[0]),
        "process": process,
    }
    save_paths(paths, basepath, fmt=cfg["format"], extra_meta=extra)
    for j in idx:
        v = paths.values[:, j]
        print(
            f"t={grid[j]:g}: mean={v.mean():.6g} var={v.var(ddof=1):.6g} "
            f"min={v.min():.6g} max={v.max():.6g}"
        )
    return 0


def cmd_density(cfg):
    process, curves = build_param_curves(cfg)
    sym = _symbol_for(process, curves)
    s = _number(cfg, "s", 0.0)
    t = _number(cfg, "t", curves.t_max)
    dens = increment_density(sym, s, t, _spectral_grid(cfg))
    basepath = os.path.join(cfg["out_dir"], f"{process}_density")
    meta = _base_meta(cfg, "density", basepath + ".csv")
    meta.update(s=s, t=t, diagnostics=dens.diagnostics)
    _write_table(basepath, ("x", "value"), (dens.x, dens.density), meta)
    print(f"density on [{s:g}, {t:g}]: mass={dens.diagnostics['mass']:.9f}")
    return 0


def cmd_levy(cfg):
    process, curves = build_param_curves(cfg)
    dens = make_levy_density(process, curves)
    t = _number(cfg, "t", 0.0)
    xs = _get(cfg, "x_values")
    if xs is None:
        lo = _number(cfg, "x_min", 0.1)
        hi = _number(cfg, "x_max", 10.0)
        if not 0 < lo < hi:
            raise ConfigError("need 0 < x_min < x_max")
        xs = np.geomspace(lo, hi, _positive_int(cfg, "x_points", 50))
    xs = np.asarray(xs, dtype=float)
    if dens.support == "positive_halfline" and np.any(xs <= 0.0):
        raise ConfigError(f"{process} jumps are positive; x values must be > 0")
    if np.any(xs == 0.0):
        raise ConfigError("the jump density is evaluated away from x = 0")
    vals, methods = [], []
    for x in xs:
        vals.append(dens(float(x), t))
        methods.append(dens.diagnostics.get("method", "closed_form"))
    basepath = os.path.join(cfg["out_dir"], f"{process}_levy")
    meta = _base_meta(cfg, "levy", basepath + ".csv")
    meta.update(t=t, methods=methods)
    _write_table(basepath, ("x", "value"), (xs, vals), meta)
    print(f"jump density at t={t:g}: {len(xs)} points, "
          f"methods {sorted(set(methods))}")
    return 0


def cmd_tails(cfg):
    process, curves = build_param_curves(cfg)
    cfg = dict(cfg)
    cfg.setdefault("n_paths", 500000)
    grid, _ = simulation_grid(cfg, curves.t_max)
    paths = _simulate_paths(process, curves, cfg, grid)
    samples = paths.values[:, -1]
    q_lo = _number(cfg, "q_lo", 0.99)
    q_hi = _number(cfg, "q_hi", 0.999)
    n_levels = _positive_int(cfg, "n_levels", 25)
    asym_fn = None
    if process == "gs1":
        asym_fn = lambda L: tail_asymptote_gs1(curves, curves.t_max, L)
    report = make_tail_report(samples, asym_fn, q_lo, q_hi, n_levels)
    se = np.sqrt(report.survival * (1.0 - report.survival) / samples.size)
    names = ["level", "survival", "stderr"]
    cols = [report.levels, report.survival, se]
    if not np.all(np.isnan(report.asymptote)):
        names.append("asymptote")
        cols.append(report.asymptote)
    basepath = os.path.join(cfg["out_dir"], f"{process}_tails")
    meta = _base_meta(cfg, "tails", basepath + ".csv")
    meta.update(
        slope=report.slope, slope_stderr=report.stderr,
        n_paths=int(samples.size), q_lo=q_lo, q_hi=q_hi,
    )
    _write_table(basepath, names, cols, meta)
    print(f"fitted tail slope {report.slope:.4f} (stderr {report.stderr:.4f}) "
          f"over survival levels [{1-q_hi:g}, {1-q_lo:g}]")
    return 0


def _initial_condition(cfg, grid):
    name = _get(cfg, "initial", "gaussian")
    center = _number(cfg, "center", 0.0)
    width = _number(cfg, "width", 1.0)
    if width <= 0:
        raise ConfigError("width must be positive")
    if name == "gaussian":
        return GridFunction.from_callable(gaussian_pulse(center, width), grid)
    if name == "bump":
        return GridFunction.from_callable(bump(center, width), grid)
    try:
        table = np.loadtxt(name, delimiter=",")
    except OSError as exc:
        raise ConfigError(
            f"initial must be 'gaussian', 'bump', or a readable CSV: {exc}"
        ) from exc
    if table.ndim != 2 or table.shape[1] < 2:
        raise ConfigError("initial CSV needs columns x, value")
    vals = np.interp(grid.x, table[:, 0], table[:, 1], left=0.0, right=0.0)
    return GridFunction(grid=grid, values=vals)


def cmd_solve(cfg):
    process, curves = build_param_curves(cfg)
    sym = _symbol_for(process, curves)
    grid = _spectral_grid(cfg)
    f0 = _initial_condition(cfg, grid)
    s = _number(cfg, "s", 0.0)
    horizons = _get(cfg, "horizons", (curves.t_max,))
    if isinstance(horizons, (int, float)) and not isinstance(horizons, bool):
        horizons = (float(horizons),)
    horizons = tuple(float(h) for h in horizons)
    if any(h < s for h in horizons):
        raise ConfigError("every horizon must satisfy horizon >= s")
    files = []
    for t in horizons:
        out = propagate(f0, sym, s, t)
        basepath = os.path.join(cfg["out_dir"], f"{process}_solve_t{t:g}")
        meta = _base_meta(cfg, "solve", basepath + ".csv")
        meta.update(s=s, t=t, initial=_get(cfg, "initial", "gaussian"),
                    max_imag=out.diagnostics.get("max_imag", 0.0))
        files.append(_write_table(basepath, ("x", "value"),
                                  (grid.x, out.values), meta))
        mass = float(out.values.sum() * grid.dx)
        print(f"t={t:g}: mass={mass:.9f} sup={out.values.max():.6g}")
    return 0


def cmd_validate(cfg):
    numbers = _get(cfg, "criteria")
    if numbers is not None:
        if isinstance(numbers, int) and not isinstance(numbers, bool):
            numbers = (numbers,)
        try:
            numbers = tuple(int(k) for k in numbers)
        except (TypeError, ValueError):
            raise ConfigError("criteria must be an integer or a tuple of integers")

    failures = []

    def report(res):
        verdict = "PASS" if res.passed else "FAIL"
        print(f"criterion {res.number:2d}  {res.name:<42s} {verdict}  "
              f"[{res.seconds:.1f}s]")
        for line in res.lines:
            print(f"    {line}")
        if not res.passed:
            failures.append(res.number)

    try:
        results = run_acceptance(numbers, report=report)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(f"passed {len(results) - len(failures)} of {len(results)} criteria"
          + (f"; failing: {failures}" if failures else ""))
    return 1 if failures else 0


_COMMANDS = {
    "simulate": (cmd_simulate, "sample paths and write them with a sidecar"),
    "density": (cmd_density, "increment density by transform inversion"),
    "levy": (cmd_levy, "jump density on an x grid"),
    "tails": (cmd_tails, "simulate, fit the survival tail, report the slope"),
    "solve": (cmd_solve, "propagate an initial density to given horizons"),
    "validate": (cmd_validate, "run the numbered acceptance criteria"),
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="geostable",
        description="simulation and analysis of geometric stable processes "
        "with time-varying parameters",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (handler, help_text) in _COMMANDS.items():
        q = sub.add_parser(name, help=help_text)
        q.add_argument("--config", help="key = value run configuration file")
        q.add_argument("--seed", type=int, help="override the config seed")
        q.add_argument("--threads", type=int,
                       help="worker threads (results do not depend on it)")
        q.add_argument("--out-dir", dest="out_dir", help="artifact directory")
        q.add_argument("--format", choices=("csv", "binary"),
                       help="path output format")
        q.set_defaults(handler=handler)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        cfg = effective_config(args)
        if cfg["out_dir"] != ".":
            os.makedirs(cfg["out_dir"], exist_ok=True)
        return args.handler(cfg)
    except (ConfigError, DomainError) as exc:
        print(f"geostable: config error: {exc}", file=sys.stderr)
        return 2
    except (GeoStableError, OSError) as exc:
        print(f"geostable: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
