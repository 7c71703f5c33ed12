"""Random-variate generation for every process family in the library.

All inhomogeneous samplers use the frozen-coefficient scheme: parameters
are held at the left endpoint of each step, where the increment law is
exactly samplable, so the only bias is the parameter drift over one step.
Every sampler draws from a single explicit stream and is bit-reproducible
for a fixed (seed, stream_id).
"""
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError
from .symbols import _check_stable_params, as_curve, feller_to_polar


@dataclass(frozen=True)
class RngStream:
    """Seed plus stream id; distinct ids give independent streams."""

    seed: int
    stream_id: int = 0

    def generator(self):
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, i):
        return RngStream(seed=self.seed, stream_id=self.stream_id + 1 + i)


@dataclass
class SamplePaths:
    """n_paths x n_times matrix of simulated values over a time grid."""

    grid: np.ndarray
    values: np.ndarray
    seed: int
    stream_id: int
    scheme: str
    step: float
    params: dict = field(default_factory=dict)

    def increments(self):
        return np.diff(self.values, axis=1)


def _as_rng(rng):
    if isinstance(rng, RngStream):
        return rng, rng.generator()
    raise DomainError("samplers need an explicit RngStream")


def _check_grid(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise ConfigError("time grid needs at least two points")
    if grid[0] != 0.0:
        raise ConfigError("time grid must start at 0 (processes start at 0)")
    if np.any(np.diff(grid) <= 0):
        raise ConfigError("time grid must be strictly increasing")
    return grid


def _stable_std(gen, alpha, theta, size):
    """Draws with characteristic function exp(-psi_{alpha,theta}).

    Polar-parameter transform of two uniforms (the classical construction),
    with the Gaussian branch at alpha = 2.
    """
    if alpha == 2.0:
        return gen.normal(0.0, math.sqrt(2.0), size)
    sigma, beta = feller_to_polar(alpha, theta)
    ta = math.tan(math.pi * alpha / 2.0)
    B = math.atan(beta * ta) / alpha
    S = (1.0 + (beta * ta) ** 2) ** (1.0 / (2.0 * alpha))
    U = gen.uniform(-math.pi / 2.0, math.pi / 2.0, size)
    W = gen.exponential(1.0, size)
    aUB = alpha * (U + B)
    out = (
        S
        * np.sin(aUB)
        / np.cos(U) ** (1.0 / alpha)
        * (np.cos(U - aUB) / W) ** ((1.0 - alpha) / alpha)
    )
    return sigma * out


def stable_sample(alpha, theta, t, n, rng):
    """n independent draws of the stable law at time t."""
    _check_stable_params(alpha, theta)
    if not t > 0:
        raise DomainError("time t must be positive")
    _, gen = _as_rng(rng)
    return t ** (1.0 / alpha) * _stable_std(gen, alpha, theta, int(n))


def gs_homog_sample(alpha, theta, b, t, n, rng):
    """Stable draws at an independent Gamma(t, b) random time."""
    _check_stable_params(alpha, theta)
    if b <= 0 or t <= 0:
        raise DomainError("b and t must be positive")
    _, gen = _as_rng(rng)
    G = b * gen.standard_gamma(t, int(n))
    return G ** (1.0 / alpha) * _stable_std(gen, alpha, theta, int(n))


def gamma_inhom_sample(curves, grid, n, rng):
    """Nondecreasing paths of the varying-scale gamma subordinator.

    Step increments are Gamma(shape h_k, scale b(t_k)); shape = step size
    is routinely << 1, which the generator's small-shape boosting handles.
    """
    curves.validate()
    grid = _check_grid(grid)
    stream, gen = _as_rng(rng)
    n = int(n)
    h = np.diff(grid)
    vals = np.zeros((n, len(grid)))
    for k, (tk, hk) in enumerate(zip(grid[:-1], h)):
        bk = float(curves.b(tk))
        vals[:, k + 1] = vals[:, k] + bk * gen.standard_gamma(hk, n)
    return SamplePaths(
        grid=grid, values=vals, seed=stream.seed, stream_id=stream.stream_id,
        scheme="frozen_left", step=float(h.max()),
        params={"process": "gamma_inhom"},
    )


def gs1_sample(curves, grid, n, rng):
    """Frozen-coefficient paths with varying (alpha, theta), constant b.

    Each step increment is an exact homogeneous geometric stable increment
    at the left-endpoint parameters.
    """
    curves.validate()
    if not _constant_b(curves):
        raise DomainError("this variant needs a constant scale b")
    grid = _check_grid(grid)
    stream, gen = _as_rng(rng)
    n = int(n)
    b = float(curves.b(0.0))
    h = np.diff(grid)
    vals = np.zeros((n, len(grid)))
    for k, (tk, hk) in enumerate(zip(grid[:-1], h)):
        ak = float(curves.alpha(tk))
        thk = float(curves.theta(tk))
        G = b * gen.standard_gamma(hk, n)
        vals[:, k + 1] = vals[:, k] + G ** (1.0 / ak) * _stable_std(gen, ak, thk, n)
    return SamplePaths(
        grid=grid, values=vals, seed=stream.seed, stream_id=stream.stream_id,
        scheme="frozen_left", step=float(h.max()),
        params={"process": "gs1", "b": b},
    )


def gs2_sample(curves, grid, n, rng):
    """Frozen-coefficient paths with constant (alpha, theta), varying b."""
    curves.validate()
    if not _constant_index(curves):
        raise DomainError("this variant needs constant (alpha, theta)")
    grid = _check_grid(grid)
    stream, gen = _as_rng(rng)
    n = int(n)
    alpha = float(curves.alpha(0.0))
    theta = float(curves.theta(0.0))
    _check_stable_params(alpha, theta)
    h = np.diff(grid)
    vals = np.zeros((n, len(grid)))
    for k, (tk, hk) in enumerate(zip(grid[:-1], h)):
        bk = float(curves.b(tk))
        G = bk * gen.standard_gamma(hk, n)
        vals[:, k + 1] = vals[:, k] + G ** (1.0 / alpha) * _stable_std(gen, alpha, theta, n)
    return SamplePaths(
        grid=grid, values=vals, seed=stream.seed, stream_id=stream.stream_id,
        scheme="frozen_left", step=float(h.max()),
        params={"process": "gs2", "alpha": alpha, "theta": theta},
    )


def multistable_sample(curves, grid, n, rng):
    """Frozen-coefficient paths of the varying-index stable process."""
    curves.validate()
    grid = _check_grid(grid)
    stream, gen = _as_rng(rng)
    n = int(n)
    h = np.diff(grid)
    vals = np.zeros((n, len(grid)))
    for k, (tk, hk) in enumerate(zip(grid[:-1], h)):
        ak = float(curves.alpha(tk))
        thk = float(curves.theta(tk))
        vals[:, k + 1] = vals[:, k] + hk ** (1.0 / ak) * _stable_std(gen, ak, thk, n)
    return SamplePaths(
        grid=grid, values=vals, seed=stream.seed, stream_id=stream.stream_id,
        scheme="frozen_left", step=float(h.max()),
        params={"process": "multistable"},
    )


def vg_inhom_sample(bcurve, grid, n, rng, mode="brownian_subordination"):
    """Variance-gamma paths with a varying scale curve.

    mode 'brownian_subordination': Brownian motion (variance 2t) run at the
    inhomogeneous gamma clock. mode 'gamma_difference': difference of two
    independent gamma subordinators with scale curve sqrt(b(s)). The two
    agree in distribution.
    """
    bcurve = as_curve(bcurve)
    grid = _check_grid(grid)
    stream, gen = _as_rng(rng)
    n = int(n)
    h = np.diff(grid)
    vals = np.zeros((n, len(grid)))
    if mode == "brownian_subordination":
        for k, (tk, hk) in enumerate(zip(grid[:-1], h)):
            dG = float(bcurve(tk)) * gen.standard_gamma(hk, n)
            vals[:, k + 1] = vals[:, k] + np.sqrt(2.0 * dG) * gen.normal(0.0, 1.0, n)
    elif mode == "gamma_difference":
        for k, (tk, hk) in enumerate(zip(grid[:-1], h)):
            s = math.sqrt(float(bcurve(tk)))
            d1 = s * gen.standard_gamma(hk, n)
            d2 = s * gen.standard_gamma(hk, n)
            vals[:, k + 1] = vals[:, k] + d1 - d2
    else:
        raise DomainError(f"unknown variance-gamma mode {mode!r}")
    return SamplePaths(
        grid=grid, values=vals, seed=stream.seed, stream_id=stream.stream_id,
        scheme="frozen_left", step=float(h.max()),
        params={"process": "vg_inhom", "mode": mode},
    )


def rescaled_gs_limit(bcurve, alpha, theta, t, n_steps, n, rng):
    """Telescopic rescaling sum_k b(t_k)^{1/alpha} (G(t_{k+1}) - G(t_k)) of a
    unit-scale homogeneous geometric stable process G.

    Converges in law to the varying-scale process as n_steps grows.
    """
    _check_stable_params(alpha, theta)
    bcurve = as_curve(bcurve)
    if not t > 0 or int(n_steps) < 1:
        raise DomainError("need t > 0 and n_steps >= 1")
    _, gen = _as_rng(rng)
    n = int(n)
    n_steps = int(n_steps)
    h = t / n_steps
    out = np.zeros(n)
    for k in range(n_steps):
        tk = k * h
        G = gen.standard_gamma(h, n)  # unit scale
        dG = G ** (1.0 / alpha) * _stable_std(gen, alpha, theta, n)
        out += float(bcurve(tk)) ** (1.0 / alpha) * dG
    return out


def _constant_b(curves):
    ts = np.linspace(0.0, curves.t_max, 65)
    bb = np.asarray([float(curves.b(s)) for s in ts])
    return bb.max() - bb.min() <= 1e-12 * (1.0 + np.abs(bb).max())


def _constant_index(curves):
    ts = np.linspace(0.0, curves.t_max, 65)
    for c in (curves.alpha, curves.theta):
        vv = np.asarray([float(c(s)) for s in ts])
        if vv.max() - vv.min() > 1e-12 * (1.0 + np.abs(vv).max()):
            return False
    return True


# ---------------------------------------------------------------------------
# persistence


def save_paths(paths, basepath, fmt="csv", extra_meta=None):
    """Write paths as CSV (one row per path) or .npy, plus a JSON sidecar.

    The sidecar carries everything needed to reproduce the file bit for bit;
    it deliberately contains no timestamps.
    """
    import os

    basepath = os.fspath(basepath)
    if fmt == "csv":
        datafile = basepath + ".csv"
        header = ",".join(f"t={tk:.17g}" for tk in paths.grid)
        np.savetxt(datafile, paths.values, delimiter=",", fmt="%.17g",
                   header=header, comments="# ")
    elif fmt == "binary":
        datafile = basepath + ".npy"
        np.save(datafile, paths.values)
    else:
        raise ConfigError(f"unknown output format {fmt!r}")
    meta = {
        "grid": [float(v) for v in paths.grid],
        "seed": int(paths.seed),
        "stream_id": int(paths.stream_id),
        "scheme": paths.scheme,
        "step": float(paths.step),
        "params": paths.params,
        "format": fmt,
        "data_file": os.path.basename(datafile),
    }
    if extra_meta:
        meta.update(extra_meta)
    with open(basepath + ".json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return datafile
