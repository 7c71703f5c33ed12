"""Jump densities: closed forms, residue series, and the quadrature oracle."""
import math

import numpy as np
import pytest

from geostable.errors import DomainError
from geostable.levy import (
    laplace_exponent_check,
    levy_gamma_inhom,
    levy_gs1_sub,
    levy_gs2_oracle,
    levy_gs2_series,
    make_levy_density,
)
from geostable.specfun import mittag_leffler
from geostable.symbols import Curve, ParamCurves

# Frozen reference for the one-sided jump density: 40-digit numerical
# inversion (Talbot contour) of the Laplace transform ln(1 + b s^alpha),
# cross-validated against a direct subordination integral to ~17 digits.
# Grid: x = geomspace(0.1, 10, 7); keys are (alpha, b).
X_ONE_SIDED = np.geomspace(0.1, 10.0, 7)
ONE_SIDED_REF = {
    (0.6, 1.0): (
        4.6072438528735587, 1.8594372870089993, 0.70523740311563752,
        0.24799640456586377, 0.080613703664243848, 0.024566368519907998,
        0.0072067826997418009,
    ),
    (0.45, 0.7): (
        2.7718428567531286, 1.0970639259185752, 0.4186107375086607,
        0.15405251461072132, 0.054883993346314272, 0.019048621461875143,
        0.0064859277317456643,
    ),
    (0.8, 1.3): (
        7.0313574925496053, 2.9338438540457976, 1.1262880964154623,
        0.37700747219945364, 0.10358698013637525, 0.023183431273485061,
        0.004787320126906851,
    ),
}

# independently computed convergent-series anchor at alpha = 1.45,
# theta = 0.3, b = 1, x = 1.5 (nested-precision subordination quadrature)
ANCHOR_145 = 0.10545227422591336


@pytest.mark.parametrize("key", sorted(ONE_SIDED_REF))
def test_one_sided_reduction_frozen_oracle(key):
    a, b = key
    for x, ref in zip(X_ONE_SIDED, ONE_SIDED_REF[key]):
        val, info = levy_gs2_series(a, -a, b, float(x), 0.0, full_output=True)
        assert info["method"] == "mittag_leffler"
        assert val == pytest.approx(ref, rel=1e-8)


def test_one_sided_uncharged_side_is_zero():
    assert levy_gs2_series(0.6, -0.6, 1.0, -2.0, 0.0) == 0.0
    assert levy_gs2_series(0.6, 0.6, 1.0, 2.0, 0.0) == 0.0


def test_gs1_subordinator_interface():
    curves = ParamCurves(alpha=0.6, theta=-0.6, b=1.0, t_max=1.0)
    x = 2.0
    direct = 0.6 / x * mittag_leffler(0.6, -(x**0.6))
    assert levy_gs1_sub(curves, x, 0.5) == pytest.approx(direct, rel=1e-13)
    with pytest.raises(DomainError):
        levy_gs1_sub(
            ParamCurves(alpha=0.6, theta=0.0, b=1.0, t_max=1.0), x, 0.5
        )


def test_gamma_jump_density():
    bcurve = Curve(points=((0.0, 2.0), (1.0, 0.5)), kind="pconst")
    for x in (0.3, 1.0, 5.0):
        assert levy_gamma_inhom(bcurve, x, 0.2) == pytest.approx(
            math.exp(-x / 2.0) / x, rel=1e-14
        )
        assert levy_gamma_inhom(bcurve, x, 1.5) == pytest.approx(
            math.exp(-x / 0.5) / x, rel=1e-14
        )
    with pytest.raises(DomainError):
        levy_gamma_inhom(bcurve, -1.0, 0.2)


def test_convergent_series_anchor():
    val, info = levy_gs2_series(1.45, 0.3, 1.0, 1.5, 0.0, full_output=True)
    assert info["method"] == "series" and not info["flagged"]
    assert val == pytest.approx(ANCHOR_145, rel=1e-10)
    oracle = levy_gs2_oracle(1.45, 0.3, 1.0, 1.5, 0.0)
    assert val == pytest.approx(oracle, rel=1e-8)


def test_series_negative_side_vs_oracle():
    val, info = levy_gs2_series(1.45, 0.3, 1.0, -1.5, 0.0, full_output=True)
    assert info["method"] == "series"
    oracle = levy_gs2_oracle(1.45, 0.3, 1.0, -1.5, 0.0)
    assert val == pytest.approx(oracle, rel=1e-6)


def test_low_alpha_asymptotic_gate():
    # close in: the divergent expansion cannot certify 1e-7 and must fall
    # back to quadrature; far out it stands on its own
    val_close, info_close = levy_gs2_series(0.6, 0.3, 1.0, 15.0, 0.0, full_output=True)
    assert info_close["flagged"] and info_close["method"] == "oracle_fallback"
    val_far, info_far = levy_gs2_series(0.6, 0.3, 1.0, 50.0, 0.0, full_output=True)
    assert info_far["method"] == "series" and info_far["err_rel"] <= 1e-7
    assert val_far == pytest.approx(
        levy_gs2_oracle(0.6, 0.3, 1.0, 50.0, 0.0), rel=1e-5
    )
    assert val_close > val_far > 0.0


def test_variance_gamma_reduction():
    for x in (0.3, 1.0, 4.0):
        ref = math.exp(-abs(x)) / abs(x)
        assert levy_gs2_oracle(2.0, 0.0, 1.0, x, 0.0) == pytest.approx(ref, rel=1e-5)
        assert levy_gs2_oracle(2.0, 0.0, 1.0, -x, 0.0) == pytest.approx(
            levy_gs2_oracle(2.0, 0.0, 1.0, x, 0.0), rel=1e-9
        )


def test_series_domain_rejections():
    with pytest.raises(DomainError):
        levy_gs2_series(1.0, 0.0, 1.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        levy_gs2_series(2.0, 0.0, 1.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        levy_gs2_series(0.6, 0.3, 1.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        levy_gs2_oracle(0.6, 0.3, 1.0, 0.0, 0.0)


def test_time_dependence_through_scale():
    bcurve = Curve(points=((0.0, 1.0), (1.0, 2.0)), kind="plinear")
    v0 = levy_gs2_series(0.6, -0.6, bcurve, 1.0, 0.0)
    v1 = levy_gs2_series(0.6, -0.6, bcurve, 1.0, 1.0)
    direct1 = 0.6 * mittag_leffler(0.6, -1.0 / 2.0)
    assert v1 == pytest.approx(direct1, rel=1e-12)
    assert v1 > v0  # larger scale puts more weight at this x


def test_laplace_exponent_identity():
    q = laplace_exponent_check(0.5, 1.0, 2.0)
    assert q == pytest.approx(-math.log1p(1.0 * 2.0**0.5), abs=1e-8)


def test_make_levy_density_dispatch():
    curves = ParamCurves(alpha=0.6, theta=0.3, b=1.0, t_max=1.0)
    dens = make_levy_density("gs2", curves)
    assert dens(50.0, 0.0) == pytest.approx(
        levy_gs2_series(0.6, 0.3, 1.0, 50.0, 0.0), rel=1e-13
    )
    assert dens.diagnostics["method"] == "series"
    sub = make_levy_density(
        "gs1", ParamCurves(alpha=0.6, theta=-0.6, b=1.0, t_max=1.0)
    )
    assert sub.support == "positive_halfline"
    with pytest.raises(DomainError):
        make_levy_density("stable", curves)


def test_tail_monotone_decay():
    vals = [levy_gs2_series(0.6, 0.3, 1.0, x, 0.0) for x in (20.0, 30.0, 50.0)]
    assert vals[0] > vals[1] > vals[2] > 0.0
