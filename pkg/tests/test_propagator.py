"""Spectral propagator, generator, and the singular-integral cross-check."""
import math

import numpy as np
import pytest

from geostable.errors import DecayError, DomainError
from geostable.propagator import (
    GridFunction,
    bump,
    commute_check,
    gaussian_pulse,
    generator_apply,
    increment_density,
    jump_weights,
    propagate,
    riesz_apply_quadrature,
    selfadjoint_check,
)
from geostable.symbols import Curve, ParamCurves, symbol_gs1, symbol_gs2, symbol_multistable
from geostable.transform import SpectralGrid


def grid(n=2048, extent=60.0):
    return SpectralGrid(n=n, x_extent=extent)


def gauss_on(g, var=1.0):
    return GridFunction.from_callable(gaussian_pulse(0.0, math.sqrt(var)), g)


def test_identity_is_exact():
    g = grid()
    f = gauss_on(g)
    sym = symbol_multistable(ParamCurves(alpha=0.7, theta=0.3, b=1.0, t_max=2.0))
    out = propagate(f, sym, 0.5, 0.5)
    assert np.array_equal(out.values, f.values)
    assert commute_check(f, sym, 0.5, 0.5) == 0.0


def test_heat_propagation_exact():
    # alpha=2 multistable symbol is -xi^2, so u(t) = N(0, 1 + 2(t-s))
    g = grid()
    f = gauss_on(g, var=1.0)
    sym = symbol_multistable(ParamCurves(alpha=2.0, theta=0.0, b=1.0, t_max=2.0))
    out = propagate(f, sym, 0.0, 0.75)
    target = gauss_on(g, var=2.5).values
    assert np.abs(out.values - target).max() <= 1e-12
    assert out.diagnostics["max_imag"] <= 1e-13


def test_chain_rule_and_mass():
    g = SpectralGrid(n=2048, x_extent=120.0)
    f = gauss_on(g, var=0.25)
    curves = ParamCurves(
        alpha=Curve(points=((0.0, 0.6), (1.0, 1.4)), kind="pconst"),
        theta=0.0, b=1.0, t_max=2.0,
    )
    sym = symbol_gs1(curves)
    whole = propagate(f, sym, 0.0, 2.0)
    half = propagate(f, sym, 0.0, 1.0)
    # heavy tails never clear the edge ratio on an affordable grid
    glued = propagate(half, sym, 1.0, 2.0, check_decay=False)
    assert np.abs(glued.values - whole.values).max() <= 1e-9
    w = g.dx
    assert abs(whole.values.sum() * w - f.values.sum() * w) <= 1e-9


def test_generator_heat_case():
    g = grid(4096, 60.0)
    f = gauss_on(g)
    sym = symbol_multistable(ParamCurves(alpha=2.0, theta=0.0, b=1.0, t_max=1.0))
    lf = generator_apply(f, sym, 0.3)
    x = g.x
    fxx = (x**2 - 1.0) * np.exp(-(x**2) / 2.0) / math.sqrt(2.0 * math.pi)
    assert np.abs(lf.values - fxx).max() <= 1e-8


def test_commute_check_small():
    curves = ParamCurves(
        alpha=Curve(points=((0.0, 0.5), (1.0, 0.9)), kind="pconst"),
        theta=0.0, b=1.0, t_max=2.0,
    )
    g = SpectralGrid(n=2048, x_extent=120.0)
    f = gauss_on(g, var=0.25)
    assert commute_check(f, symbol_gs1(curves), 0.0, 2.0) <= 1e-9


def test_selfadjoint_symmetric_case():
    g = grid(1024, 40.0)
    f = gauss_on(g, var=1.0)
    h = GridFunction.from_callable(gaussian_pulse(0.8, 0.7), g)

    def apply_sym(u):
        sym = symbol_multistable(ParamCurves(alpha=1.5, theta=0.0, b=1.0, t_max=1.0))
        return generator_apply(u, sym, 0.0)

    def apply_skew(u):
        sym = symbol_multistable(ParamCurves(alpha=0.7, theta=-0.7, b=1.0, t_max=1.0))
        return generator_apply(u, sym, 0.0)

    assert selfadjoint_check(apply_sym, f, h) <= 1e-12
    assert selfadjoint_check(apply_skew, f, h) > 1e-6


@pytest.mark.parametrize("alpha", [0.5, 0.6])
def test_riesz_quadrature_matches_spectral(alpha):
    g = SpectralGrid(n=8192, x_extent=160.0)
    f = gauss_on(g, var=1.0)
    sym = symbol_multistable(ParamCurves(alpha=alpha, theta=0.0, b=1.0, t_max=1.0))
    spec = generator_apply(f, sym, 0.0)
    quad = riesz_apply_quadrature(f, alpha)
    mid = np.abs(g.x) <= 20.0
    assert np.abs(quad.values[mid] - spec.values[mid]).max() <= 5e-4


def test_jump_weights():
    cp, cm = jump_weights(0.5, 0.0)
    ref = math.gamma(1.5) * math.sin(math.pi / 4.0) / math.pi
    assert cp == pytest.approx(ref, rel=1e-12)
    assert cm == pytest.approx(ref, rel=1e-12)
    cp1, cm1 = jump_weights(0.7, -0.7)  # positive jumps only
    assert cm1 == pytest.approx(0.0, abs=1e-16)
    assert cp1 == pytest.approx(math.gamma(1.7) * math.sin(0.7 * math.pi) / math.pi, rel=1e-12)
    with pytest.raises(DomainError):
        riesz_apply_quadrature(gauss_on(grid(256, 20.0)), 2.0)
    with pytest.raises(DomainError):
        riesz_apply_quadrature(gauss_on(grid(256, 20.0)), 1.5, 0.3)


def test_decay_guard():
    g = grid(256, 12.0)
    f = gauss_on(g, var=9.0)  # visibly non-zero at the edge
    sym = symbol_multistable(ParamCurves(alpha=2.0, theta=0.0, b=1.0, t_max=1.0))
    with pytest.raises(DecayError):
        propagate(f, sym, 0.0, 0.5)
    out = propagate(f, sym, 0.0, 0.5, check_decay=False)
    assert np.isfinite(out.values).all()


def test_grid_function_validation():
    g = grid(256, 20.0)
    with pytest.raises(DomainError):
        GridFunction(grid=g, values=np.zeros(100))


def test_profiles():
    g = grid(1024, 30.0)
    v = GridFunction.from_callable(gaussian_pulse(0.0, 1.0), g).values
    assert abs(v.sum() * g.dx - 1.0) <= 1e-6
    bv = GridFunction.from_callable(bump(0.0, 2.0), g).values
    assert np.all(bv[np.abs(g.x) >= 2.0] == 0.0)
    assert np.all(bv[np.abs(g.x) < 2.0] > 0.0)
    with pytest.raises(DomainError):
        bump(0.0, -1.0)


def test_increment_density_laplace():
    # geometric stable with alpha=2, theta=0, b=1 over unit time is Laplace
    curves = ParamCurves(alpha=2.0, theta=0.0, b=1.0, t_max=1.0)
    sym = symbol_gs2(curves)
    g = SpectralGrid(n=2**18, x_extent=40.0)
    dens = increment_density(sym, 0.0, 1.0, g)
    target = 0.5 * np.exp(-np.abs(g.x))
    assert np.abs(dens.density - target).max() <= 1e-4
    assert abs(dens.density.sum() * g.dx - 1.0) <= 1e-6


def test_increment_density_heat():
    curves = ParamCurves(alpha=2.0, theta=0.0, b=1.0, t_max=1.0)

    from geostable.symbols import SymbolEval

    def ev(xi, t):
        return -np.asarray(xi, dtype=complex) ** 2

    sym = SymbolEval(eval=ev)
    g = grid(4096, 60.0)
    dens = increment_density(sym, 0.0, 0.5, g)
    target = np.exp(-g.x**2 / 2.0) / math.sqrt(2.0 * math.pi)
    assert np.abs(dens.density - target).max() <= 1e-12
    with pytest.raises(DomainError):
        increment_density(sym, 1.0, 0.5, g)
