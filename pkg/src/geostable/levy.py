"""Time-dependent Levy densities and consistency checks.

The varying-scale geometric stable family has closed-form residue series
for its Levy density; a subordination-integral quadrature serves as an
independent second route. Series instability (divergent asymptotic range,
or parameters where a reciprocal-gamma factor sits near a pole) is
detected and routed to the quadrature oracle.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from .errors import DomainError, QuadratureError, SeriesError
from .specfun import DEFAULT_CONTROL, mittag_leffler, recip_gamma_pair
from .symbols import _check_stable_params, as_curve
from .transform import stable_density

_SINGULAR_TOL = 1e-3


@dataclass
class LevyDensity:
    """Pointwise evaluator (x, t) -> nu_t(x) with truncation diagnostics."""

    eval: object
    support: str = "full_line"  # or "positive_halfline"
    diagnostics: dict = field(default_factory=dict)

    def __call__(self, x, t):
        return self.eval(x, t)


def levy_gamma_inhom(bcurve, x, t):
    """Jump density of the varying-scale gamma subordinator:
    x^{-1} e^{-x/b(t)} for x > 0."""
    bcurve = as_curve(bcurve)
    x = float(x)
    if x <= 0:
        raise DomainError("gamma jump density lives on x > 0")
    return math.exp(-x / float(bcurve(t))) / x


def levy_gs1_sub(curves, x, t):
    """Jump density of the varying-index geometric stable subordinator:
    alpha(t) x^{-1} E_{alpha(t)}(-x^alpha(t) / b).

    Needs alpha(t) in (0, 1] with theta(t) = -alpha(t); alpha = 1 is the
    gamma limit and is accepted here even though process-level admissibility
    excludes it.
    """
    x = float(x)
    if x <= 0:
        raise DomainError("subordinator jump density lives on x > 0")
    a = float(curves.alpha(t))
    if not 0.0 < a <= 1.0:
        raise DomainError("levy_gs1_sub needs alpha(t) in (0, 1]")
    if a < 1.0 and abs(float(curves.theta(t)) + a) > 1e-9:
        raise DomainError("levy_gs1_sub needs the one-sided case theta = -alpha")
    b = float(curves.b(t))
    return a / x * mittag_leffler(a, -(x ** a) / b)


def _dist_to_int(r):
    return abs(r - round(r))


def _series_low(alpha, theta_x, b, ax, control):
    """alpha in (0, 1): divergent expansion in b |x|^-alpha, optimally
    truncated. Returns (value, err_rel, l_stop)."""
    y = b * ax ** (-alpha)
    pref = alpha * b * ax ** (-alpha - 1.0)
    s = 0.0
    prev_env = math.inf
    err = math.inf
    l_stop = 0
    ly = math.log(y)
    for l in range(control.k_max):
        lenv = gammaln(alpha * (l + 1.0)) + l * ly
        env = math.exp(lenv) if lenv < 700.0 else math.inf
        if env > prev_env:
            err = env  # first omitted term
            break
        term = ((-1.0) ** l) * env * math.sin(
            math.pi * (l + 1.0) * (alpha - theta_x) / 2.0
        ) / math.pi
        s += term
        prev_env = env
        l_stop = l
        if env <= control.rel_tol * max(abs(s), 1e-300) and l >= control.k_min:
            err = math.exp(gammaln(alpha * (l + 2.0)) + (l + 1) * ly)
            break
    else:
        raise SeriesError("levy series: k_max reached without truncation")
    rel = err / max(abs(s), 1e-300)
    return pref * s, rel, l_stop


def _series_high(alpha, theta_x, b, ax, control):
    """alpha in (1, 2): convergent two-family residue series.

    Returns (value, flagged_singular, k_stop). The two pole families are
    guarded against near-collisions (k/alpha or n*alpha within 1e-3 of an
    integer), where reciprocal-gamma factors blow up; the caller falls back
    to the quadrature oracle on a flag.
    """
    z = b ** (-1.0 / alpha) * ax
    c = (alpha - theta_x) / (2.0 * alpha)
    pref = b ** (-1.0 / alpha) / alpha
    lz = math.log(z)

    s = c * alpha * alpha / z  # residue at the family junction
    # family in integer powers of z
    small = 0
    for l in range(control.k_max):
        k = l + 1.0
        r = k / alpha
        if _dist_to_int(r) < _SINGULAR_TOL:
            return math.nan, True, l
        A = -math.pi / (r * math.sin(math.pi * r))
        lmag = l * lz - gammaln(l + 1.0)
        term = ((-1.0) ** l) * math.exp(lmag) * A * math.sin(math.pi * c * k) / math.pi
        s += term
        # |A| <= pi / (r sin(pi * 1e-3)) after the guard
        bound = math.exp(lmag) * (1000.0 * alpha / k)
        if bound <= control.rel_tol * max(abs(s), 1e-300) and l >= control.k_min:
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    else:
        raise SeriesError("levy series: k_max reached in the integer family")
    k_stop = l

    # family in powers of z^alpha
    small = 0
    for n in range(1, control.k_max):
        if _dist_to_int(n * alpha) < _SINGULAR_TOL:
            return math.nan, True, k_stop
        lmag = (n * alpha - 1.0) * lz - gammaln(n * alpha)
        term = (
            ((-1.0) ** n)
            * (alpha / n)
            * math.exp(lmag)
            * math.sin(math.pi * c * n * alpha)
            / math.sin(math.pi * n * alpha)
        )
        s += term
        bound = math.exp(lmag) * (alpha / n) / math.sin(math.pi * _SINGULAR_TOL)
        if bound <= control.rel_tol * max(abs(s), 1e-300) and n >= control.k_min:
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    else:
        raise SeriesError("levy series: k_max reached in the fractional family")
    return pref * s, False, k_stop


def levy_gs2_series(alpha, theta, bcurve, x, t, control=None, full_output=False):
    """Levy density of the varying-scale geometric stable process by
    residue series, with oracle fallback.

    For alpha in (0,1) the expansion in b(t)|x|^-alpha is asymptotic; it is
    truncated at its smallest term and abandoned for the quadrature oracle
    when that term is too large. The one-sided cases theta = -alpha (and
    mirrored +alpha) reduce exactly to a Mittag-Leffler form and are
    evaluated through it. For alpha in (1,2) the series is convergent but
    parameters with k/alpha or k*alpha nearly integral are flagged and
    routed to the oracle.
    """
    control = control or DEFAULT_CONTROL
    _check_stable_params(alpha, theta)
    if alpha >= 2.0 or alpha == 1.0:
        raise DomainError("series form needs alpha in (0,1) or (1,2)")
    x = float(x)
    if x == 0.0:
        raise DomainError("Levy density is evaluated away from x = 0")
    bcurve = as_curve(bcurve)
    b = float(bcurve(t))
    sign = 1.0 if x > 0 else -1.0
    theta_x = theta * sign
    ax = abs(x)
    info = {"method": "series", "truncation": 0, "flagged": False, "err_rel": 0.0}

    if alpha < 1.0 and abs(abs(theta) - alpha) < 1e-14:
        # one-sided law: closed Mittag-Leffler form on the charged side
        if theta_x == -alpha:
            val = alpha / ax * mittag_leffler(alpha, -(ax ** alpha) / b, control)
        else:
            val = 0.0
        info["method"] = "mittag_leffler"
        return (val, info) if full_output else val

    if alpha < 1.0:
        val, rel, l_stop = _series_low(alpha, theta_x, b, ax, control)
        info["truncation"] = l_stop
        info["err_rel"] = rel
        if rel > 1e-7:
            info["flagged"] = True
    else:
        val, flagged, k_stop = _series_high(alpha, theta_x, b, ax, control)
        info["truncation"] = k_stop
        info["flagged"] = flagged

    if info["flagged"] or not math.isfinite(val):
        val, oinfo = levy_gs2_oracle(alpha, theta, bcurve, x, t, full_output=True)
        info["method"] = "oracle_fallback"
        info["quad_err"] = oinfo["quad_err"]
    elif val < 0.0:
        if val < -1e-9:
            raise SeriesError(f"levy series produced a negative density {val:.3e}")
        val = 0.0
    return (val, info) if full_output else val


def levy_gs2_oracle(alpha, theta, bcurve, x, t, rel_tol=1e-7, full_output=False):
    """Levy density by subordination quadrature:
    int_0^inf tau^{-1/alpha} p(x tau^{-1/alpha}; 1) tau^{-1} e^{-tau/b(t)} dtau
    where p is the standardized stable density. alpha = 2 is allowed.
    """
    _check_stable_params(alpha, theta)
    x = float(x)
    if x == 0.0:
        raise DomainError("Levy density is evaluated away from x = 0")
    bcurve = as_curve(bcurve)
    b = float(bcurve(t))
    ax = abs(x)
    ia = 1.0 / alpha

    def integrand(u):
        w = x * math.exp(-u * ia)
        return math.exp(-u * ia) * float(stable_density(alpha, theta, w)) * math.exp(
            -math.exp(u) / b
        )

    u_hi = math.log(46.0 * b) + 0.5
    u_lo = -50.0 - (1.0 + alpha) * abs(math.log(ax))
    # panel splits where the density evaluator switches branch, and at the
    # exponential shoulder
    cuts = sorted(
        {
            u_lo,
            u_hi,
            min(max(alpha * math.log(ax / 15.0), u_lo + 1e-9), u_hi - 1e-9),
            min(max(alpha * math.log(ax), u_lo + 1e-9), u_hi - 1e-9),
            min(max(0.0, u_lo + 1e-9), u_hi - 1e-9),
        }
    )
    total = 0.0
    err = 0.0
    for a_, b_ in zip(cuts, cuts[1:]):
        v, e = quad(integrand, a_, b_, epsabs=1e-15, epsrel=1e-9, limit=400)
        total += v
        err += e
    if total > 0 and err / total > rel_tol:
        raise QuadratureError(
            f"subordination quadrature error {err/total:.1e} above {rel_tol:.0e}"
        )
    info = {"method": "oracle", "quad_err": err}
    return (total, info) if full_output else total


def make_levy_density(process, curves, control=None):
    """Package a process tag and parameter curves as a LevyDensity."""
    control = control or DEFAULT_CONTROL
    if process == "gamma_inhom":
        return LevyDensity(
            eval=lambda x, t: levy_gamma_inhom(curves.b, x, t),
            support="positive_halfline",
        )
    if process == "gs1":
        return LevyDensity(
            eval=lambda x, t: levy_gs1_sub(curves, x, t),
            support="positive_halfline",
        )
    if process == "gs2":
        a0 = float(curves.alpha(0.0))
        th0 = float(curves.theta(0.0))
        dens = LevyDensity(eval=None, support="full_line")

        def ev(x, t):
            val, info = levy_gs2_series(a0, th0, curves.b, x, t, control, full_output=True)
            dens.diagnostics.update(info)
            return val

        dens.eval = ev
        return dens
    raise DomainError(f"no Levy density for process {process!r}")


def laplace_exponent_check(alpha_val, b, lam):
    """Quadrature of int_0^inf (e^{-lam x} - 1) nu(x) dx for the
    subordinator density nu(x) = alpha x^{-1} E_alpha(-x^alpha / b).

    The analytic value is -ln(1 + b lam^alpha); the return value is the
    quadrature side, so callers can difference the two routes.
    """
    if not 0.0 < alpha_val < 1.0:
        raise DomainError("laplace_exponent_check needs alpha in (0, 1)")
    if b <= 0 or lam <= 0:
        raise DomainError("b and lam must be positive")

    def nu(x):
        return alpha_val / x * mittag_leffler(alpha_val, -(x ** alpha_val) / b)

    def f(x):
        return math.expm1(-lam * x) * nu(x)

    X = max((1e4 * b) ** (1.0 / alpha_val), 46.0 / lam)
    v1, e1 = quad(f, 1e-10, 2.0, epsabs=1e-12, epsrel=1e-10, limit=400)
    v2, e2 = quad(lambda u: f(math.exp(u)) * math.exp(u), math.log(2.0), math.log(X),
                  epsabs=1e-12, epsrel=1e-10, limit=400)
    # analytic remainder of int_X^inf (0 - 1) nu from the large-x expansion;
    # 1/Gamma(1 - alpha k) goes through the reflection pair, finite at poles
    tail = 0.0
    for k in range(1, 7):
        recip = recip_gamma_pair(1.0 - alpha_val * k) * math.gamma(alpha_val * k)
        tail -= ((-1.0) ** (k - 1)) * b ** k * X ** (-alpha_val * k) * recip / k
    if e1 + e2 > 1e-8:
        raise QuadratureError("laplace exponent quadrature did not converge")
    return v1 + v2 + tail
