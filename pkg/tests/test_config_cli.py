"""Config parsing and the command-line entry point (run in-process)."""
import json
import math
import types

import numpy as np
import pytest

from geostable.cli import main
from geostable.config import (
    build_curve,
    build_param_curves,
    config_hash,
    effective_config,
    parse_config_text,
    simulation_grid,
)
from geostable.errors import ConfigError
from geostable.levy import levy_gs2_series


def args(**kw):
    base = {"config": None, "seed": None, "out_dir": None, "format": None, "threads": None}
    base.update(kw)
    return types.SimpleNamespace(**base)


def test_parse_config_text():
    cfg = parse_config_text(
        "process = 'gs2'\n"
        "alpha = 0.7  # index\n"
        "b = ((0.0, 1.0), (1.0, 2.0))\n"
        "\n"
        "label = plain-string\n"
    )
    assert cfg["process"] == "gs2"
    assert cfg["alpha"] == 0.7
    assert cfg["b"] == ((0.0, 1.0), (1.0, 2.0))
    assert cfg["label"] == "plain-string"  # unquoted fallback stays a string
    with pytest.raises(ConfigError):
        parse_config_text("just a line\n")
    with pytest.raises(ConfigError):
        parse_config_text("a = 1\na = 2\n")
    with pytest.raises(ConfigError):
        parse_config_text("2bad = 1\n")


def test_config_hash_scope():
    cfg = {"process": "gs2", "seed": 1, "out_dir": "x", "threads": 2}
    h = config_hash(cfg)
    assert h == config_hash({**cfg, "out_dir": "elsewhere", "threads": 8})
    assert h != config_hash({**cfg, "seed": 2})
    assert h != config_hash({**cfg, "format": "binary"})


def test_build_curve_forms():
    c = build_curve({"b": 1.5}, "b")
    assert c(0.7) == 1.5
    c = build_curve(
        {"b": ((0.0, 1.0), (1.0, 2.0)), "b_kind": "plinear"}, "b"
    )
    assert c(0.5) == 1.5
    assert build_curve({}, "b") is None
    assert build_curve({}, "b", default=2.0)(0.3) == 2.0
    with pytest.raises(ConfigError):
        build_curve({"b": 1.0, "b_kind": "spline"}, "b")
    with pytest.raises(ConfigError):
        build_curve({"b": True}, "b")
    with pytest.raises(ConfigError):
        build_curve({"b": "rising"}, "b")


def test_build_param_curves():
    process, curves = build_param_curves({"process": "gamma_inhom", "b": 0.8})
    assert process == "gamma_inhom"
    assert curves.alpha(0.0) == 2.0 and curves.theta(0.0) == 0.0  # inert defaults
    with pytest.raises(ConfigError):
        build_param_curves({"process": "brownian"})
    with pytest.raises(ConfigError):
        build_param_curves({"process": "gs2", "alpha": 1.0})
    with pytest.raises(ConfigError):
        build_param_curves({"process": "gs2", "t_max": -1.0})


def test_effective_config_overrides():
    cfg = effective_config(args(seed=7, threads=3))
    assert cfg["seed"] == 7 and cfg["threads"] == 3
    assert cfg["format"] == "csv" and cfg["out_dir"] == "."
    with pytest.raises(ConfigError):
        effective_config(args(format="parquet"))
    with pytest.raises(ConfigError):
        effective_config(args(threads=0))


def test_simulation_grid_horizons():
    grid, idx = simulation_grid({"n_steps": 4, "horizons": (0.5, 1.0)}, 1.0)
    assert len(grid) == 5 and idx == (2, 4)
    with pytest.raises(ConfigError):
        simulation_grid({"n_steps": 3, "horizons": (0.5,)}, 1.0)


# ---------------------------------------------------------------------------
# CLI end to end


def write_cfg(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


SIM_CFG = (
    "process = 'gs2'\n"
    "alpha = 0.8\n"
    "theta = 0.2\n"
    "b = ((0.0, 1.0), (1.0, 2.0))\n"
    "b_kind = 'plinear'\n"
    "t_max = 1.0\n"
    "n_steps = 20\n"
    "n_paths = 400\n"
    "seed = 11\n"
    "horizons = (0.5, 1.0)\n"
)


def test_cli_simulate_reproducible(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "sim.cfg", SIM_CFG)
    out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
    assert main(["simulate", "--config", cfg, "--out-dir", out1]) == 0
    assert main(["simulate", "--config", cfg, "--out-dir", out2, "--threads", "4"]) == 0
    capsys.readouterr()
    d1 = (tmp_path / "a" / "gs2_paths.csv").read_bytes()
    d2 = (tmp_path / "b" / "gs2_paths.csv").read_bytes()
    assert d1 == d2  # thread count must not alter a byte
    meta = json.loads((tmp_path / "a" / "gs2_paths.json").read_text())
    assert meta["seed"] == 11
    assert meta["config_hash"] == json.loads(
        (tmp_path / "b" / "gs2_paths.json").read_text()
    )["config_hash"]

    out3 = str(tmp_path / "c")
    assert main(["simulate", "--config", cfg, "--out-dir", out3, "--seed", "12"]) == 0
    capsys.readouterr()
    meta3 = json.loads((tmp_path / "c" / "gs2_paths.json").read_text())
    assert meta3["config_hash"] != meta["config_hash"]
    assert (tmp_path / "c" / "gs2_paths.csv").read_bytes() != d1


def test_cli_rejects_bad_config(tmp_path, capsys):
    bad = write_cfg(tmp_path, "bad.cfg", "process = 'gs2'\nalpha = 1.0\n")
    assert main(["simulate", "--config", bad, "--out-dir", str(tmp_path)]) == 2
    assert "config error" in capsys.readouterr().err
    assert main(["simulate", "--config", str(tmp_path / "nope.cfg")]) == 2
    capsys.readouterr()
    offgrid = write_cfg(
        tmp_path, "off.cfg", SIM_CFG.replace("horizons = (0.5, 1.0)", "horizons = (0.33,)")
    )
    assert main(["simulate", "--config", offgrid, "--out-dir", str(tmp_path)]) == 2
    capsys.readouterr()


def test_cli_levy_closed_form_column(tmp_path, capsys):
    cfg = write_cfg(
        tmp_path,
        "levy.cfg",
        "process = 'gs2'\nalpha = 0.6\ntheta = -0.6\nb = 1.0\n"
        "x_values = (0.5, 1.0, 2.0)\n",
    )
    assert main(["levy", "--config", cfg, "--out-dir", str(tmp_path)]) == 0
    capsys.readouterr()
    table = np.loadtxt(tmp_path / "gs2_levy.csv", delimiter=",")
    for x, v in table:
        ref = levy_gs2_series(0.6, -0.6, 1.0, x, 0.0)
        assert v == pytest.approx(ref, rel=1e-12)
    meta = json.loads((tmp_path / "gs2_levy.json").read_text())
    assert meta["columns"] == ["x", "value"]
    assert set(meta["methods"]) == {"mittag_leffler"}


def test_cli_solve_identity(tmp_path, capsys):
    cfg = write_cfg(
        tmp_path,
        "solve.cfg",
        "process = 'gs_homog'\nalpha = 0.7\ntheta = 0.0\nb = 1.0\n"
        "t_max = 1.0\nn_steps = 10\nhorizons = (0.0, 1.0)\n"
        "grid_n = 1024\ngrid_extent = 60.0\n"
        "initial = 'gaussian'\nwidth = 0.5\n",
    )
    assert main(["solve", "--config", cfg, "--out-dir", str(tmp_path)]) == 0
    capsys.readouterr()
    snap0 = np.loadtxt(tmp_path / "gs_homog_solve_t0.csv", delimiter=",")
    x = snap0[:, 0]
    width = 0.5
    init = np.exp(-(x**2) / (2 * width**2)) / (width * math.sqrt(2 * math.pi))
    assert np.abs(snap0[:, 1] - init).max() == 0.0  # s = t is the identity
    snap1 = np.loadtxt(tmp_path / "gs_homog_solve_t1.csv", delimiter=",")
    mass = np.trapezoid(snap1[:, 1], x)
    # the alpha=0.7 tails hold real mass beyond any affordable window
    assert abs(mass - 1.0) <= 1e-3


def test_cli_density_mass(tmp_path, capsys):
    cfg = write_cfg(
        tmp_path,
        "dens.cfg",
        "process = 'gs_homog'\nalpha = 2.0\ntheta = 0.0\nb = 1.0\n"
        "t_max = 1.0\ngrid_n = 262144\ngrid_extent = 40.0\n",
    )
    assert main(["density", "--config", cfg, "--out-dir", str(tmp_path)]) == 0
    capsys.readouterr()
    meta = json.loads((tmp_path / "gs_homog_density.json").read_text())
    assert meta["diagnostics"]["mass"] == pytest.approx(1.0, abs=1e-6)


def test_cli_tails_slope(tmp_path, capsys):
    cfg = write_cfg(
        tmp_path,
        "tails.cfg",
        "process = 'gs_homog'\nalpha = 0.7\ntheta = 0.0\nb = 1.0\n"
        "t_max = 1.0\nn_steps = 4\nn_paths = 60000\n"
        "q_lo = 0.95\nq_hi = 0.995\nn_levels = 12\nseed = 5\n",
    )
    assert main(["tails", "--config", cfg, "--out-dir", str(tmp_path)]) == 0
    capsys.readouterr()
    meta = json.loads((tmp_path / "gs_homog_tails.json").read_text())
    assert -1.0 < meta["slope"] < -0.4  # crude: exponent near -alpha
    table = np.loadtxt(tmp_path / "gs_homog_tails.csv", delimiter=",")
    assert table.shape[1] == 3
    assert np.all(np.diff(table[:, 1]) <= 0)  # survival decreases in level


def test_cli_validate_subset(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "val.cfg", "criteria = (1,)\n")
    assert main(["validate", "--config", cfg, "--out-dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "criterion  1" in out and "PASS" in out
    bad = write_cfg(tmp_path, "valbad.cfg", "criteria = (99,)\n")
    assert main(["validate", "--config", bad, "--out-dir", str(tmp_path)]) == 2
    capsys.readouterr()
