"""Run configuration: flat key = value files with python literals.

A config is a plain dict of literals. Parameter curves are given either as
a scalar (constant) or as a tuple of (time, value) breakpoints, with an
optional <name>_kind key choosing 'pconst' or 'plinear'. The config hash
covers every key that affects artifact content (only the output directory
and the thread count are excluded), so artifacts can be traced back to the
exact run that made them.
"""
import ast
import hashlib

from .errors import ConfigError, DomainError, GeoStableError
from .symbols import Curve, ParamCurves

PROCESSES = (
    "stable",
    "gamma_inhom",
    "gs_homog",
    "gs1",
    "gs2",
    "multistable",
    "vg_inhom",
)

# keys that change where output goes or how fast it is computed, but not
# a single output byte; excluded from the hash
_UNHASHED = ("out_dir", "threads")


def parse_config_text(text):
    cfg = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key.isidentifier():
            raise ConfigError(f"line {lineno}: bad key {key!r}")
        if key in cfg:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        value = value.strip()
        try:
            cfg[key] = ast.literal_eval(value)
        except (ValueError, SyntaxError):
            cfg[key] = value
    return cfg


def load_config(path):
    try:
        with open(path) as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def config_hash(cfg):
    lines = sorted(f"{k}={cfg[k]!r}" for k in cfg if k not in _UNHASHED)
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()


def _get(cfg, key, default=None, required=False):
    if key not in cfg:
        if required:
            raise ConfigError(f"missing required config key {key!r}")
        return default
    return cfg[key]


def _positive_int(cfg, key, default=None, required=False):
    v = _get(cfg, key, default, required)
    if v is None:
        return None
    if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
        raise ConfigError(f"config key {key!r} must be a positive integer")
    return v


def _number(cfg, key, default=None, required=False):
    v = _get(cfg, key, default, required)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"config key {key!r} must be a number")
    return float(v)


def build_curve(cfg, name, default=None):
    """Scalar value or ((t0,v0),(t1,v1),...) breakpoints -> Curve."""
    spec = _get(cfg, name, default)
    if spec is None:
        return None
    kind = _get(cfg, name + "_kind", "pconst")
    if kind not in ("pconst", "plinear"):
        raise ConfigError(f"{name}_kind must be 'pconst' or 'plinear'")
    k_bound = _number(cfg, name + "_k_bound")
    if isinstance(spec, bool):
        raise ConfigError(f"config key {name!r} must be a number or breakpoints")
    if isinstance(spec, (int, float)):
        return Curve(points=((0.0, float(spec)),), kind=kind, k_bound=k_bound)
    try:
        points = tuple((float(t), float(v)) for t, v in spec)
    except (TypeError, ValueError):
        raise ConfigError(
            f"config key {name!r} must be a number or a sequence of (t, value) pairs"
        )
    return Curve(points=points, kind=kind, k_bound=k_bound)


def build_param_curves(cfg):
    """Assemble the (alpha, theta, b) triple for the configured process.

    Unused coordinates get inert defaults so the admissibility checks can
    run uniformly.
    """
    process = _get(cfg, "process", required=True)
    if process not in PROCESSES:
        raise ConfigError(f"unknown process {process!r}; choose from {PROCESSES}")
    t_max = _number(cfg, "t_max", 1.0)
    if t_max <= 0:
        raise ConfigError("t_max must be positive")
    alpha = build_curve(cfg, "alpha", 2.0)
    theta = build_curve(cfg, "theta", 0.0)
    b = build_curve(cfg, "b", 1.0)
    curves = ParamCurves(alpha=alpha, theta=theta, b=b, t_max=t_max)
    try:
        curves.validate()
    except DomainError as exc:
        raise ConfigError(f"inadmissible parameter curves: {exc}") from exc
    return process, curves


def effective_config(args):
    """Merge the config file with command-line overrides."""
    cfg = load_config(args.config) if getattr(args, "config", None) else {}
    if getattr(args, "seed", None) is not None:
        cfg["seed"] = args.seed
    if getattr(args, "out_dir", None) is not None:
        cfg["out_dir"] = args.out_dir
    if getattr(args, "format", None) is not None:
        cfg["format"] = args.format
    if getattr(args, "threads", None) is not None:
        cfg["threads"] = args.threads
    cfg.setdefault("seed", 0)
    cfg.setdefault("out_dir", ".")
    cfg.setdefault("format", "csv")
    cfg.setdefault("threads", 1)
    if cfg["format"] not in ("csv", "binary"):
        raise ConfigError("format must be 'csv' or 'binary'")
    if not isinstance(cfg["seed"], int) or isinstance(cfg["seed"], bool):
        raise ConfigError("seed must be an integer")
    _positive_int(cfg, "threads")
    return cfg


def simulation_grid(cfg, t_max):
    """Uniform step grid plus the horizon indices used for summaries."""
    import numpy as np

    n_steps = _positive_int(cfg, "n_steps", 100)
    grid = np.linspace(0.0, t_max, n_steps + 1)
    horizons = _get(cfg, "horizons", (t_max,))
    if isinstance(horizons, (int, float)) and not isinstance(horizons, bool):
        horizons = (float(horizons),)
    idx = []
    for hz in horizons:
        j = int(round(float(hz) / t_max * n_steps))
        if not (0 <= j <= n_steps) or abs(grid[j] - float(hz)) > 1e-9 * t_max:
            raise ConfigError(
                f"horizon {hz} does not lie on the step grid (n_steps={n_steps})"
            )
        idx.append(j)
    return grid, tuple(idx)
