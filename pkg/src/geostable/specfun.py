"""Scalar special functions: log-gamma, reciprocal-gamma pairs, Mittag-Leffler.

Everything here is a pure function of its arguments and safe to call from
any number of threads. Series truncation is governed by SeriesControl.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, loggamma

from .errors import DomainError, SeriesError

_EPS = np.finfo(float).eps
_LOG_HUGE = 700.0  # exp() overflow threshold, log scale

# relative accuracy a double-precision branch must promise before we accept
# it; otherwise evaluation escalates to arbitrary precision
_ACCEPT = 1e-11


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for all series in the library."""

    rel_tol: float = 1e-14
    k_min: int = 4
    k_max: int = 400

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("SeriesControl.rel_tol must be positive")
        if not 1 <= self.k_min <= self.k_max:
            raise DomainError("SeriesControl needs 1 <= k_min <= k_max")


DEFAULT_CONTROL = SeriesControl()


def log_gamma(z):
    """Principal branch of ln Gamma(z).

    Accepts real or complex z; rejects the poles at 0, -1, -2, ...
    """
    zc = complex(z)
    if zc.imag == 0.0 and zc.real <= 0.0 and zc.real == round(zc.real):
        raise DomainError(f"log_gamma pole at z={z!r}")
    if zc.imag == 0.0 and zc.real > 0.0:
        return float(gammaln(zc.real))
    return complex(loggamma(zc))


def recip_gamma_pair(z):
    """1 / (Gamma(z) * Gamma(1-z)) = sin(pi z) / pi, entire in z.

    Returns exactly 0.0 at integer z, where one factor has a pole.
    """
    z = float(z)
    if z == round(z):
        return 0.0
    return math.sin(math.pi * z) / math.pi


def _ml_series(alpha, z, control):
    """Power-series pass for E_alpha(z), terms kept in log scale.

    Returns (value_or_none, max_log_term, converged, n_terms). A None value
    means a term overflowed double precision before convergence.
    """
    s = 1.0
    max_lt = 0.0
    lz = math.log(abs(z))
    neg = z < 0.0
    small = 0
    for j in range(1, control.k_max + 1):
        lt = j * lz - gammaln(alpha * j + 1.0)
        max_lt = max(max_lt, lt)
        if lt > _LOG_HUGE:
            return None, max_lt, False, j
        term = math.exp(lt)
        if neg and j % 2:
            term = -term
        s += term
        if abs(term) <= control.rel_tol * abs(s):
            small += 1
            if small >= 2 and j >= control.k_min:
                return s, max_lt, True, j
        else:
            small = 0
    return s, max_lt, False, control.k_max


def _ml_asymptotic(alpha, z, control):
    """Large-negative-z expansion of E_alpha, optimally truncated.

    The expansion sum_{k>=1} (-1)^{k-1} |z|^{-k} / Gamma(1 - alpha k) is
    divergent; summation stops at the smallest term. Returns
    (value, rel_error_estimate).
    """
    x = -z
    lx = math.log(x)
    s = 0.0
    prev_env = math.inf
    for k in range(1, control.k_max + 1):
        lenv = gammaln(alpha * k) - k * lx
        env = math.exp(lenv) / math.pi if lenv < _LOG_HUGE else math.inf
        if env > prev_env:
            # terms started growing: truncate before this one
            break
        # 1/Gamma(1 - alpha k) via reflection, finite at the poles
        term = env * math.sin(math.pi * alpha * k)
        if k % 2 == 0:
            term = -term
        s += term
        prev_env = env
        if abs(env) <= control.rel_tol * abs(s) and k >= control.k_min:
            env = math.exp(gammaln(alpha * (k + 1)) - (k + 1) * lx) / math.pi
            break
    if s == 0.0:
        return 0.0, math.inf
    return s, abs(env) / abs(s)


def _ml_mp(alpha, z, max_log_term):
    """Arbitrary-precision fallback for the cancellation gap at z < 0."""
    import mpmath as mp

    dps = 20 + int(max(0.0, max_log_term) / math.log(10.0))
    with mp.workdps(dps):
        a = mp.mpf(alpha)
        zz = mp.mpf(z)
        s = mp.mpf(1)
        tiny = mp.mpf(10) ** (-(dps - 5))
        small = 0
        j = 1
        while j < 20000:
            t = zz ** j / mp.gamma(a * j + 1)
            s += t
            if abs(t) <= tiny * abs(s):
                small += 1
                if small >= 2:
                    break
            else:
                small = 0
            j += 1
        return float(s)


def mittag_leffler(alpha, z, control=None):
    """One-parameter Mittag-Leffler function E_alpha(z) for alpha in (0, 1].

    For z <= 0 the result lies in (0, 1]. Branch choice between the power
    series and the large-|z| expansion is driven by per-branch error
    estimates; when neither double-precision branch can promise ~1e-11
    relative accuracy the sum is redone in arbitrary precision.
    """
    control = control or DEFAULT_CONTROL
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"mittag_leffler needs alpha in (0, 1], got {alpha}")
    z = float(z)
    if alpha == 1.0:
        if z > _LOG_HUGE:
            raise DomainError(f"mittag_leffler overflow guard: z={z}")
        return math.exp(z)
    if z == 0.0:
        return 1.0

    if z > 0.0:
        if z ** (1.0 / alpha) > _LOG_HUGE:
            raise DomainError(f"mittag_leffler overflow guard: z={z}, alpha={alpha}")
        value, _, converged, n = _ml_series(alpha, z, control)
        if not converged:
            raise SeriesError(f"mittag_leffler: no convergence in {n} terms")
        return value

    # z < 0: both branches, pick by estimated error
    s_val, max_lt, s_conv, _ = _ml_series(alpha, z, control)
    if s_conv and s_val is not None and s_val > 0.0:
        est_series = _EPS * math.exp(min(max_lt, _LOG_HUGE)) / s_val
    else:
        est_series = math.inf
    a_val, est_asym = _ml_asymptotic(alpha, z, control)

    best, est = (s_val, est_series) if est_series <= est_asym else (a_val, est_asym)
    if est <= _ACCEPT:
        return best
    # cancellation gap: peak log-term is about |z|^(1/alpha)
    peak = (-z) ** (1.0 / alpha)
    return _ml_mp(alpha, z, max(max_lt, peak))
