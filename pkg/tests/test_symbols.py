"""Characteristic exponents, parameter curves, and symbol identities."""
import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geostable.errors import DomainError
from geostable.symbols import (
    Curve,
    ParamCurves,
    accumulated_exponent,
    as_curve,
    feller_to_polar,
    joint_cf,
    log_symbol_resolvent,
    log_symbol_series,
    psi,
    symbol_gamma_inhom,
    symbol_gs1,
    symbol_gs2,
    symbol_stable,
    symbol_vg_inhom,
)


def admissible_pairs():
    return st.tuples(
        st.floats(0.05, 2.0).filter(lambda a: abs(a - 1.0) > 1e-3),
        st.floats(-1.0, 1.0),
    ).map(lambda p: (p[0], p[1] * min(p[0], 2.0 - p[0])))


def test_psi_closed_form():
    val = psi(0.7, 0.3, 2.0)
    assert val == pytest.approx(2.0**0.7 * cmath.exp(1j * math.pi * 0.3 / 2), rel=1e-14)
    assert psi(0.7, 0.3, 0.0) == 0.0
    # negative frequency flips the phase
    assert psi(0.7, 0.3, -2.0) == pytest.approx(np.conj(val), rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(pair=admissible_pairs(), xi=st.floats(-30.0, 30.0))
def test_psi_hermitian_and_dissipative(pair, xi):
    a, th = pair
    v = psi(a, th, xi)
    assert abs(v - np.conj(psi(a, th, -xi))) <= 1e-12 * (1.0 + abs(v))
    assert v.real >= -1e-15  # |exp(-t psi)| <= 1


def test_feller_to_polar():
    assert feller_to_polar(2.0, 0.0) == (1.0, 0.0)
    sigma, beta = feller_to_polar(0.5, -0.5)
    assert beta == 1.0  # one-sided edge
    assert sigma == pytest.approx(math.cos(math.pi / 4) ** 2, rel=1e-14)
    sigma, beta = feller_to_polar(1.5, 0.0)
    assert (sigma, beta) == (1.0, 0.0)


def test_parameter_rejections():
    for a, th in ((1.0, 0.0), (0.0, 0.0), (2.2, 0.0), (0.5, 0.6), (1.7, -0.4)):
        with pytest.raises(DomainError):
            psi(a, th, 1.0)


def test_resolvent_matches_closed_form():
    worst = 0.0
    for b in (0.1, 0.7, 2.5):
        for (a, th, xi) in ((0.5, -0.3, 0.7), (1.4, 0.4, 2.0), (1.9, 0.0, 5.0)):
            p = psi(a, th, xi)
            worst = max(worst, abs(log_symbol_resolvent(b, p) + np.log1p(b * p)))
    assert worst <= 1e-8


def test_series_partial_sums_converge():
    b, p = 0.4, psi(0.7, -0.3, 1.5)
    target = -np.log1p(b * p)
    errs = [abs(log_symbol_series(b, p, N) - target) for N in (5, 20, 80)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] <= 1e-10


def test_pconst_exponent_closed_form():
    curves = ParamCurves(
        alpha=Curve(points=((0.0, 0.4), (1.0, 0.8)), kind="pconst"),
        theta=Curve(points=((0.0, -0.4), (1.0, -0.8)), kind="pconst"),
        b=1.0,
        t_max=2.0,
    )
    sym = symbol_gs1(curves)
    for xi in (0.3, 1.0, 4.0):
        expect = -(np.log1p(psi(0.4, -0.4, xi)) + np.log1p(psi(0.8, -0.8, xi)))
        got = accumulated_exponent(sym, 0.0, 2.0, xi)
        assert abs(got - expect) <= 1e-12 * (1.0 + abs(expect))


def test_exponent_additivity_and_zero():
    curves = ParamCurves(
        alpha=0.7,
        theta=0.2,
        b=Curve(points=((0.0, 0.5), (1.0, 2.0)), kind="plinear"),
        t_max=1.0,
    )
    sym = symbol_gs2(curves)
    xi = np.array([0.0, 0.5, 2.0, -3.0])
    whole = accumulated_exponent(sym, 0.0, 1.0, xi)
    split = accumulated_exponent(sym, 0.0, 0.3, xi) + accumulated_exponent(
        sym, 0.3, 1.0, xi
    )
    assert np.max(np.abs(whole - split)) <= 1e-11
    assert whole[0] == 0.0  # eta(0, t) = 0


def test_symbols_have_nonpositive_real_part():
    bcurve = Curve(points=((0.0, 0.5), (1.0, 1.5)), kind="plinear")
    curves = ParamCurves(alpha=1.3, theta=0.3, b=bcurve, t_max=1.0)
    xi = np.linspace(-20.0, 20.0, 41)
    for sym in (
        symbol_gs1(ParamCurves(alpha=0.7, theta=-0.1, b=1.0, t_max=1.0)),
        symbol_gs2(curves),
        symbol_gamma_inhom(bcurve),
        symbol_vg_inhom(bcurve),
        symbol_stable(1.5, -0.5),
    ):
        for t in (0.0, 0.4, 0.9):
            assert np.max(np.asarray(sym.eval(xi, t)).real) <= 1e-12


def test_gamma_and_vg_symbol_forms():
    bcurve = as_curve(0.8)
    g = symbol_gamma_inhom(bcurve)
    v = symbol_vg_inhom(bcurve)
    for xi in (0.5, -2.0, 7.0):
        assert g.eval(xi, 0.3) == pytest.approx(-np.log(1 - 1j * 0.8 * xi), rel=1e-13)
        assert v.eval(xi, 0.3) == pytest.approx(-np.log1p(0.8 * xi * xi), rel=1e-13)


def test_joint_cf_single_time_reduces():
    curves = ParamCurves(alpha=0.7, theta=0.0, b=1.0, t_max=1.0)
    sym = symbol_gs2(curves)
    direct = np.exp(accumulated_exponent(sym, 0.0, 0.8, 1.3))
    assert joint_cf(sym, [0.8], [1.3]) == pytest.approx(direct, rel=1e-12)
    two = joint_cf(sym, [0.4, 0.8], [0.6, 0.7])
    assert abs(two) <= 1.0 + 1e-12
    with pytest.raises(DomainError):
        joint_cf(sym, [0.8, 0.4], [1.0, 1.0])


def test_curve_evaluation():
    c = Curve(points=((0.0, 1.0), (1.0, 3.0)), kind="pconst")
    assert c(0.5) == 1.0 and c(1.0) == 3.0 and c(2.0) == 3.0 and c(-1.0) == 1.0
    lin = Curve(points=((0.0, 1.0), (1.0, 3.0)), kind="plinear")
    assert lin(0.5) == 2.0 and lin(2.0) == 3.0
    arr = lin(np.array([0.0, 0.25, 1.0]))
    assert np.allclose(arr, [1.0, 1.5, 3.0])
    assert as_curve(2.5)(0.7) == 2.5
    assert as_curve(c) is c
    assert as_curve(((0.0, 1.0), (2.0, 4.0)))(2.0) == 4.0


def test_curve_validation():
    with pytest.raises(DomainError):
        Curve(points=((0.0, 1.0), (0.0, 2.0)))
    with pytest.raises(DomainError):
        Curve(points=(), kind="pconst")
    with pytest.raises(DomainError):
        Curve(points=((0.0, 1.0),), kind="cubic")


def test_param_curves_validate():
    ok = ParamCurves(
        alpha=Curve(points=((0.0, 0.4), (1.0, 0.8)), kind="pconst"),
        theta=Curve(points=((0.0, -0.4), (1.0, -0.8)), kind="pconst"),
        b=1.0,
        t_max=2.0,
    )
    ok.validate()  # declared-breakpoint steps are admissible

    with pytest.raises(DomainError):
        ParamCurves(
            alpha=Curve(points=((0.0, 0.8), (1.0, 1.2)), kind="plinear"),
            theta=0.0, b=1.0, t_max=1.0,
        ).validate()  # crosses 1
    with pytest.raises(DomainError):
        ParamCurves(alpha=0.5, theta=0.7, b=1.0, t_max=1.0).validate()
    with pytest.raises(DomainError):
        ParamCurves(alpha=0.5, theta=0.0, b=-1.0, t_max=1.0).validate()
    with pytest.raises(DomainError):
        # an undeclared jump hiding inside a callable curve
        ParamCurves(
            alpha=lambda t: 0.4 if t < 0.37 else 0.8, theta=0.0, b=1.0, t_max=1.0
        ).validate()


def test_k_bound_enforcement():
    bounded = Curve(points=((0.0, 0.3),), k_bound=0.5)
    ParamCurves(alpha=0.7, theta=0.0, b=bounded, t_max=1.0).validate()
    with pytest.raises(DomainError):
        ParamCurves(
            alpha=0.7, theta=0.0,
            b=Curve(points=((0.0, 0.7),), k_bound=0.5), t_max=1.0,
        ).validate()
    with pytest.raises(DomainError):
        ParamCurves(
            alpha=0.7, theta=0.0,
            b=Curve(points=((0.0, 0.7),), k_bound=1.5), t_max=1.0,
        ).validate()
