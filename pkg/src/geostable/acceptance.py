"""Acceptance suite: eleven numbered validation criteria.

Each criterion is a function returning a CriterionResult with one line per
sub-check (measured vs required). The random seed is fixed a priori; the
suite is deterministic and criteria draw from disjoint streams, so running
a subset gives the same numbers as the full run.
"""
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .levy import (
    laplace_exponent_check,
    levy_gs2_oracle,
    levy_gs2_series,
)
from .propagator import (
    GridFunction,
    gaussian_pulse,
    generator_apply,
    propagate,
    riesz_apply_quadrature,
    selfadjoint_check,
)
from .sampling import (
    RngStream,
    gs1_sample,
    gs2_sample,
    gs_homog_sample,
    rescaled_gs_limit,
    stable_sample,
    vg_inhom_sample,
)
from .specfun import mittag_leffler
from .symbols import (
    Curve,
    ParamCurves,
    accumulated_exponent,
    log_symbol_resolvent,
    log_symbol_series,
    psi,
    symbol_gs1,
    symbol_gs2,
    symbol_stable,
)
from .transform import (
    SpectralGrid,
    empirical_cf,
    tail_asymptote_gs1,
    tail_constants_gs2,
    tail_slope_fit,
)

ACCEPTANCE_SEED = 20260815

_XI = np.array([0.25, 0.5, 1.0, 2.0, 4.0])

_STABLE_CASES = ((2.0, 0.0), (0.8, 0.0), (0.6, -0.6), (1.5, 0.3))

# frozen oracle for the one-sided reduction: inverse Laplace transform of
# ln(1 + b lam^alpha) on a 7-point log grid over [0.1, 10], computed at 40
# digits and cross-validated against a direct subordination integral
_X_8B = np.geomspace(0.1, 10.0, 7)
_ORACLE_8B = {
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


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    lines: list = field(default_factory=list)
    seconds: float = 0.0


class _Checks:
    """Collects (label, ok, detail) rows and the aggregate verdict."""

    def __init__(self):
        self.rows = []

    def add(self, label, ok, detail):
        self.rows.append((bool(ok), f"{label}: {detail}"))

    def info(self, label, detail):
        self.rows.append((None, f"{label}: {detail}"))

    @property
    def passed(self):
        return all(ok for ok, _ in self.rows if ok is not None)

    @property
    def lines(self):
        out = []
        for ok, text in self.rows:
            tag = "info" if ok is None else ("ok" if ok else "FAIL")
            out.append(f"[{tag}] {text}")
        return out


def _stream(criterion, j=0):
    return RngStream(seed=ACCEPTANCE_SEED, stream_id=criterion * 10 + j)


def _cf_sup_err(samples, target):
    emp = empirical_cf(samples, _XI)
    return float(np.abs(emp - target).max())


def _two_regime_curves():
    alpha = Curve(points=((0.0, 0.4), (1.0, 0.8)), kind="pconst")
    theta = Curve(points=((0.0, -0.4), (1.0, -0.8)), kind="pconst")
    return ParamCurves(alpha=alpha, theta=theta, b=1.0, t_max=2.0)


def criterion_1():
    c = _Checks()
    z = np.linspace(-10.0, 10.0, 200)
    rel = max(
        abs(mittag_leffler(1.0, zz) - math.exp(zz)) / math.exp(zz) for zz in z
    )
    c.add("exp reduction at order 1", rel <= 1e-12, f"max rel {rel:.2e} <= 1e-12")
    oracle = math.exp(1.0) * math.erfc(1.0)
    err = abs(mittag_leffler(0.5, -1.0) - oracle)
    c.add("half-order erfc identity", err <= 1e-9, f"|diff| {err:.2e} <= 1e-9")
    return c


def criterion_2():
    c = _Checks()
    bs = np.geomspace(0.05, 4.0, 10)
    psis = [
        psi(a, th, xi)
        for (a, th, xi) in (
            (0.4, 0.0, 0.5), (0.4, -0.4, 2.0), (0.7, 0.3, 1.0),
            (0.7, -0.7, 4.0), (1.3, 0.5, 0.5), (1.3, 0.0, 2.0),
            (1.8, -0.2, 1.0), (1.8, 0.0, 4.0), (2.0, 0.0, 0.7),
            (0.9, 0.1, 3.0),
        )
    ]
    worst = 0.0
    for b in bs:
        for p in psis:
            target = -np.log1p(b * p)
            worst = max(worst, abs(log_symbol_resolvent(b, p) - target))
    c.add("resolvent vs closed form", worst <= 1e-8,
          f"max |diff| {worst:.2e} <= 1e-8 on 100-point grid")
    worst_final = 0.0
    monotone = True
    for b in bs:
        for p in psis:
            if abs(b * p) > 0.9:
                continue
            target = -np.log1p(b * p)
            errs = [abs(log_symbol_series(b, p, N) - target) for N in (10, 60, 400)]
            # below ~1e-12 the sequence sits at roundoff; call that converged
            monotone &= all(e2 <= max(e1, 1e-12) for e1, e2 in zip(errs, errs[1:]))
            worst_final = max(worst_final, errs[2])
    c.add("series partial sums", monotone and worst_final <= 1e-8,
          f"errors decrease and final {worst_final:.2e} <= 1e-8 for |b psi| <= 0.9")
    return c


def criterion_3():
    c = _Checks()
    n = 10**6
    for j, (a, th) in enumerate(_STABLE_CASES):
        x = stable_sample(a, th, 1.0, n, _stream(3, j))
        err = _cf_sup_err(x, np.exp(-psi(a, th, _XI)))
        c.add(f"stable CF ({a},{th})", err <= 5e-3, f"sup err {err:.2e} <= 5e-3")
    return c


def criterion_4():
    c = _Checks()
    n = 10**6
    b, t = 1.0, 1.0
    for j, (a, th) in enumerate(_STABLE_CASES):
        x = gs_homog_sample(a, th, b, t, n, _stream(4, j))
        target = np.exp(-t * np.log1p(b * psi(a, th, _XI)))
        err = _cf_sup_err(x, target)
        c.add(f"geometric stable CF ({a},{th})", err <= 5e-3,
              f"sup err {err:.2e} <= 5e-3")
        if a == 2.0 and th == 0.0:
            v = float(x.var())
            m2 = float((x**2).mean())
            se = math.sqrt((float((x**4).mean()) - m2 * m2) / n)
            c.add("variance at order 2", abs(v - 2 * b * t) <= 3 * se,
                  f"|{v:.4f} - {2*b*t}| <= 3 SE = {3*se:.2e}")
    return c


def criterion_5():
    c = _Checks()
    curves = _two_regime_curves()
    sym = symbol_gs1(curves)
    target = np.exp(accumulated_exponent(sym, 0.0, 2.0, _XI))
    errs = {}
    n = 10**6
    for j, h_inv in enumerate((50, 100)):
        grid = np.linspace(0.0, 2.0, 2 * h_inv + 1)
        paths = gs1_sample(curves, grid, n, _stream(5, j))
        errs[h_inv] = _cf_sup_err(paths.values[:, -1], target)
    c.add("CF error at h=1/100", errs[100] <= 7e-3,
          f"sup err {errs[100]:.2e} <= 7e-3")
    c.add("finer step no worse", errs[100] < errs[50],
          f"{errs[100]:.2e} (h=1/100) < {errs[50]:.2e} (h=1/50); both steps "
          "resolve the piecewise-constant curves exactly, so this compares "
          "two unbiased MC errors")
    return c


def criterion_6():
    c = _Checks()
    bcurve = Curve(points=((0.0, 1.0), (1.0, 2.0)), kind="plinear")
    curves = ParamCurves(alpha=0.7, theta=0.0, b=bcurve, t_max=1.0)
    sym = symbol_gs2(curves)
    target = np.exp(accumulated_exponent(sym, 0.0, 1.0, _XI))
    n = 10**6
    paths = gs2_sample(curves, np.linspace(0.0, 1.0, 101), n, _stream(6, 0))
    err = _cf_sup_err(paths.values[:, -1], target)
    c.add("CF error at h=1/100", err <= 5e-3, f"sup err {err:.2e} <= 5e-3")
    dists = []
    for j, m in enumerate((4, 16, 64)):
        x = rescaled_gs_limit(bcurve, 0.7, 0.0, 1.0, m, n, _stream(6, 1 + j))
        dists.append(_cf_sup_err(x, target))
    ok = dists[0] > dists[1] > dists[2]
    c.add("rescaled construction converges", ok,
          "CF distance " + " > ".join(f"{d:.2e}" for d in dists)
          + " over n_steps 4, 16, 64")
    return c


def criterion_7():
    c = _Checks()
    bcurve = Curve(points=((0.0, 0.5), (1.0, 0.75)), kind="plinear")
    n = 10**6
    grid = np.linspace(0.0, 1.0, 101)
    p1 = vg_inhom_sample(bcurve, grid, n, _stream(7, 0), mode="brownian_subordination")
    p2 = vg_inhom_sample(bcurve, grid, n, _stream(7, 1), mode="gamma_difference")
    x1 = p1.values[:, -1]
    x2 = p2.values[:, -1]
    dist = float(np.abs(empirical_cf(x1, _XI) - empirical_cf(x2, _XI)).max())
    c.add("mode agreement", dist <= 7e-3, f"CF distance {dist:.2e} <= 7e-3")
    v_target = 1.25  # twice the integral of b over [0, 1]
    for label, x in (("subordination", x1), ("difference", x2)):
        v = float(x.var())
        m2 = float((x**2).mean())
        se = math.sqrt((float((x**4).mean()) - m2 * m2) / n)
        c.add(f"variance ({label})", abs(v - v_target) <= 3 * se,
              f"|{v:.4f} - {v_target}| <= 3 SE = {3*se:.2e}")
    return c


def criterion_8():
    c = _Checks()
    worst = 0.0
    for a in (0.4, 0.5, 0.7):
        for b in (0.5, 1.0, 2.0):
            for lam in (0.3, 1.0, 3.0):
                q = laplace_exponent_check(a, b, lam)
                worst = max(worst, abs(q + math.log1p(b * lam**a)))
    c.add("(a) Laplace exponent", worst <= 1e-6,
          f"max |defect| {worst:.2e} <= 1e-6 on 27-point grid")

    worst = 0.0
    for (a, b), vals in _ORACLE_8B.items():
        for x, ref in zip(_X_8B, vals):
            v = levy_gs2_series(a, -a, b, float(x), 0.0)
            worst = max(worst, abs(v - ref) / ref)
    c.add("(b) one-sided reduction", worst <= 1e-8,
          f"max rel {worst:.2e} <= 1e-8 vs frozen transform-inversion oracle")

    worst = 0.0
    for x in np.geomspace(0.2, 5.0, 9):
        v = levy_gs2_oracle(2.0, 0.0, 1.0, float(x), 0.0)
        ref = math.exp(-x) / x
        worst = max(worst, abs(v - ref) / ref)
    c.add("(c) variance-gamma reduction", worst <= 1e-5,
          f"max rel {worst:.2e} <= 1e-5 on [0.2, 5]")

    worst = 0.0
    methods = set()
    for x in (20.0, 30.0, 50.0, 120.0, -20.0, -50.0):
        v, info = levy_gs2_series(0.6, 0.3, 1.0, x, 0.0, full_output=True)
        methods.add(info["method"])
        ref = levy_gs2_oracle(0.6, 0.3, 1.0, x, 0.0)
        worst = max(worst, abs(v - ref) / abs(ref))
    c.add("(d) series vs oracle", worst <= 1e-5 and methods == {"series"},
          f"max rel {worst:.2e} <= 1e-5, methods {sorted(methods)} (series route)")
    return c


def criterion_9():
    c = _Checks()
    a, th, b, t = 0.7, 0.0, 1.0, 1.0
    n = 10**7
    x = gs_homog_sample(a, th, b, t, n, _stream(9, 0))
    slope, stderr = tail_slope_fit(x)
    c.add("tail slope", -0.75 <= slope <= -0.65,
          f"slope {slope:.4f} in [-0.75, -0.65] (stderr {stderr:.3f})")
    q999 = float(np.quantile(x, 0.999))
    measured = q999**a * 1e-3
    C, _ = tail_constants_gs2(a, th)
    stated = C / math.gamma(1.0 - a) * b * t
    rel = abs(measured / stated - 1.0)
    c.add("tail constant (stated normalization)", rel <= 0.15,
          f"x^a P at 99.9% = {measured:.4f} vs {stated:.4f} (rel {rel:.2f} <= 0.15)")
    corrected = stated * math.cos(math.pi * th / 2.0) / math.cos(math.pi * a / 2.0)
    rel_c = abs(measured / corrected - 1.0)
    c.info("tail constant (corrected normalization)",
           f"{measured:.4f} vs {corrected:.4f} (rel {rel_c:.2f}); the stated "
           "constant omits the cos(pi theta/2)/cos(pi alpha/2) scale factor")

    curves = _two_regime_curves()
    paths = gs1_sample(curves, np.array([0.0, 1.0, 2.0]), n, _stream(9, 1))
    y = paths.values[:, -1]
    slope_mc, _ = tail_slope_fit(y)
    lo, hi = np.quantile(y, [0.99, 0.9999])
    levels = np.geomspace(lo, hi, 25)
    pred = np.array([tail_asymptote_gs1(curves, 2.0, lv) for lv in levels])
    A = np.vander(np.log(levels), 2)
    slope_pred = float(np.linalg.lstsq(A, np.log(pred), rcond=None)[0][0])
    c.add("varying-index slope", abs(slope_mc - slope_pred) <= 0.05,
          f"MC slope {slope_mc:.4f} vs predicted {slope_pred:.4f} "
          f"(|diff| {abs(slope_mc - slope_pred):.4f} <= 0.05)")
    return c


def criterion_10():
    c = _Checks()
    bcurve = Curve(points=((0.0, 1.0), (1.0, 2.0)), kind="plinear")
    curves = ParamCurves(alpha=0.7, theta=0.0, b=bcurve, t_max=1.0)
    sym = symbol_gs2(curves)
    grid = SpectralGrid(n=8192, x_extent=240.0)
    f0 = GridFunction.from_callable(gaussian_pulse(0.0, 0.5), grid)

    direct = propagate(f0, sym, 0.0, 1.0)
    chained = propagate(propagate(f0, sym, 0.0, 0.4), sym, 0.4, 1.0,
                        check_decay=False)
    chain = float(np.abs(direct.values - chained.values).max())
    c.add("chain rule", chain <= 1e-9, f"sup defect {chain:.2e} <= 1e-9")
    mass_in = float(f0.values.sum() * grid.dx)
    mass_out = float(direct.values.sum() * grid.dx)
    c.add("mass conservation", abs(mass_out - mass_in) <= 1e-9,
          f"|{mass_out:.12f} - {mass_in:.12f}| <= 1e-9")

    t0 = 0.5
    Af = generator_apply(f0, sym, t0).values
    errs = []
    for h in (1e-2, 5e-3, 2.5e-3):
        Th = propagate(f0, sym, t0, t0 + h).values
        errs.append(float(np.abs((Th - f0.values) / h - Af).max()))
    r1, r2 = errs[1] / errs[0], errs[2] / errs[1]
    c.add("generator rate", 0.3 <= r1 <= 0.7 and 0.3 <= r2 <= 0.7,
          f"difference-quotient errors {errs[0]:.2e}, {errs[1]:.2e}, "
          f"{errs[2]:.2e}; ratios {r1:.2f}, {r2:.2f} in [0.3, 0.7]")

    n = 10**6
    paths = gs2_sample(curves, np.linspace(0.0, 1.0, 101), n, _stream(10, 0))
    noise = _stream(10, 1).generator().normal(0.0, 0.5, n)
    samples = paths.values[:, -1] + noise
    lo, hi = -12.0, 12.0
    nbins = 200
    w = (hi - lo) / nbins
    counts, _ = np.histogram(samples, bins=nbins, range=(lo, hi))
    hist = counts / (n * w)
    centers_fine = np.linspace(lo, hi, nbins * 10 + 1)
    dens_fine = np.interp(centers_fine, grid.x, direct.values)
    model = dens_fine[:-1].reshape(nbins, 10).mean(axis=1)
    l1 = float(np.abs(hist - model).sum() * w)
    c.add("density vs histogram", l1 <= 0.02, f"L1 distance {l1:.4f} <= 0.02")
    return c


def criterion_11():
    c = _Checks()
    grid = SpectralGrid(n=4096, x_extent=80.0)
    f = GridFunction.from_callable(gaussian_pulse(0.0, 1.0), grid)
    g = GridFunction.from_callable(gaussian_pulse(1.5, 0.7), grid)
    res_sym = max(
        selfadjoint_check(lambda u: generator_apply(u, symbol_stable(a, 0.0), 0.0), f, g)
        for a in (0.5, 1.5)
    )
    c.add("self-adjointness (symmetric)", res_sym <= 1e-9,
          f"residual {res_sym:.2e} <= 1e-9")
    res_neg = selfadjoint_check(
        lambda u: generator_apply(u, symbol_stable(0.7, -0.7), 0.0), f, g
    )
    ok = res_neg >= 1e3 * max(res_sym, 1e-300) and res_neg > 1e-6
    c.add("asymmetric negative control", ok,
          f"residual {res_neg:.2e} >= 1000x symmetric ({res_sym:.2e})")

    big = SpectralGrid(n=32768, x_extent=640.0)
    fb = GridFunction.from_callable(gaussian_pulse(0.0, 1.0), big)
    worst = 0.0
    for a, th in ((0.5, 0.0), (1.5, 0.0), (0.7, -0.7)):
        spec = generator_apply(fb, symbol_stable(a, th), 0.0).values
        quadr = riesz_apply_quadrature(fb, a, th).values
        rel = float(np.abs(spec - quadr).max() / np.abs(spec).max())
        worst = max(worst, rel)
    c.add("quadrature vs spectral generator", worst <= 1e-4,
          f"max rel {worst:.2e} <= 1e-4 over three parameter pairs")
    return c


_CRITERIA = {
    1: ("special functions", criterion_1),
    2: ("symbol identities", criterion_2),
    3: ("stable sampler CF", criterion_3),
    4: ("geometric stable CF and variance", criterion_4),
    5: ("varying-index scheme convergence", criterion_5),
    6: ("varying-scale scheme and rescaling limit", criterion_6),
    7: ("variance-gamma constructions", criterion_7),
    8: ("Levy measures", criterion_8),
    9: ("tail behavior", criterion_9),
    10: ("propagator", criterion_10),
    11: ("operator checks", criterion_11),
}


def run_acceptance(numbers=None, report=None):
    """Run the numbered criteria (all by default); returns CriterionResults."""
    if numbers is None:
        numbers = sorted(_CRITERIA)
    results = []
    for k in numbers:
        if k not in _CRITERIA:
            raise ValueError(f"unknown criterion {k}; choose from 1..11")
        name, fn = _CRITERIA[k]
        t0 = time.time()
        checks = fn()
        res = CriterionResult(
            number=k, name=name, passed=checks.passed,
            lines=checks.lines, seconds=time.time() - t0,
        )
        results.append(res)
        if report is not None:
            report(res)
    return results
