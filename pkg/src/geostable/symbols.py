"""Characteristic exponents (Fourier symbols) with time-varying parameters.

Conventions used throughout the library: the forward Fourier transform
carries e^{-i xi x} and a 1/sqrt(2 pi) factor; a process with exponent
eta has increment characteristic function exp(int_s^t eta(xi, tau) dtau).
Complex logarithms are always the principal branch, and each symbol
asserts that its log argument stays in the right half-plane.
"""
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, QuadratureError

_ADMISSIBLE_SLACK = 1e-12

SYMBOL_KINDS = (
    "stable",
    "multistable",
    "gs1",
    "gs2",
    "gamma_inhom",
    "vg_inhom",
    "custom",
)


def _check_stable_params(alpha, theta):
    if not (0.0 < alpha <= 2.0) or alpha == 1.0:
        raise DomainError(
            f"stability index must lie in (0,2] and differ from 1, got alpha={alpha}"
        )
    if abs(theta) > min(alpha, 2.0 - alpha) + _ADMISSIBLE_SLACK:
        raise DomainError(
            f"asymmetry must satisfy |theta| <= min(alpha, 2-alpha), got "
            f"alpha={alpha}, theta={theta}"
        )


def psi(alpha, theta, xi):
    """Stable characteristic exponent |xi|^alpha e^{i sign(xi) pi theta/2}.

    Vanishes at xi = 0; Re psi >= 0 for admissible parameters, so
    exp(-t psi) is a valid characteristic function. Vectorized in xi.
    """
    _check_stable_params(alpha, theta)
    x = np.asarray(xi, dtype=float)
    out = np.abs(x) ** alpha * np.exp(1j * np.sign(x) * (math.pi * theta / 2.0))
    return complex(out) if out.ndim == 0 else out


def feller_to_polar(alpha, theta):
    """Map (alpha, theta) to the polar scale/skewness pair (sigma, beta).

    sigma = cos(pi theta/2)^(1/alpha), beta = -tan(pi theta/2)/tan(pi alpha/2).
    At alpha = 2 the skewness is immaterial; (1, 0) is returned by convention.
    """
    _check_stable_params(alpha, theta)
    if alpha == 2.0:
        return 1.0, 0.0
    sigma = math.cos(math.pi * theta / 2.0) ** (1.0 / alpha)
    beta = -math.tan(math.pi * theta / 2.0) / math.tan(math.pi * alpha / 2.0)
    beta = min(1.0, max(-1.0, beta))  # clip roundoff at the one-sided edge
    return sigma, beta


# ---------------------------------------------------------------------------
# parameter curves


@dataclass(frozen=True)
class Curve:
    """Scalar function of time defined by a breakpoint table.

    kind 'pconst' holds value v_i on [t_i, t_{i+1}); kind 'plinear'
    interpolates linearly between knots. Outside the table the nearest
    value is extended. k_bound optionally declares a strict upper bound
    K for exponential-moment work.
    """

    points: tuple
    kind: str = "pconst"
    k_bound: float = None

    def __post_init__(self):
        if self.kind not in ("pconst", "plinear"):
            raise DomainError(f"unknown curve kind {self.kind!r}")
        pts = tuple((float(t), float(v)) for t, v in self.points)
        if not pts:
            raise DomainError("curve needs at least one breakpoint")
        ts = [p[0] for p in pts]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise DomainError("curve breakpoints must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @staticmethod
    def constant(v):
        return Curve(points=((0.0, float(v)),))

    @property
    def breakpoints(self):
        return tuple(p[0] for p in self.points)

    def __call__(self, t):
        ts = np.array([p[0] for p in self.points])
        vs = np.array([p[1] for p in self.points])
        tt = np.asarray(t, dtype=float)
        if self.kind == "plinear":
            out = np.interp(tt, ts, vs)
        else:
            idx = np.clip(np.searchsorted(ts, tt, side="right") - 1, 0, len(ts) - 1)
            out = vs[idx]
        return float(out) if out.ndim == 0 else out


def as_curve(spec):
    """Promote a number, callable, or breakpoint list to a curve."""
    if isinstance(spec, Curve) or callable(spec):
        return spec
    if np.isscalar(spec):
        return Curve.constant(spec)
    return Curve(points=tuple(spec))


def _curve_breakpoints(curve, lo, hi):
    bps = getattr(curve, "breakpoints", ())
    return tuple(t for t in bps if lo < t < hi)


def _is_constant(curve, t_max, tol=1e-12):
    ts = np.linspace(0.0, t_max, 257)
    vals = np.asarray([float(curve(t)) for t in ts])
    return vals.max() - vals.min() <= tol * (1.0 + np.abs(vals).max())


@dataclass(frozen=True)
class ParamCurves:
    """The time-varying parameter triple alpha(t), theta(t), b(t).

    Admissibility (checked by validate(), not at construction, so that
    limiting curves can still be evaluated pointwise):
      alpha(t) in (0,2], alpha(t) != 1, with no crossing of 1;
      |theta(t)| <= min(alpha(t), 2-alpha(t));
      b(t) > 0, and b(t) < K < 1 when a k_bound is declared on b.
    """

    alpha: object
    theta: object
    b: object
    t_max: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_curve(self.alpha))
        object.__setattr__(self, "theta", as_curve(self.theta))
        object.__setattr__(self, "b", as_curve(self.b))
        if not self.t_max > 0:
            raise DomainError("t_max must be positive")

    def breakpoints(self, lo=0.0, hi=None):
        hi = self.t_max if hi is None else hi
        out = set()
        for c in (self.alpha, self.theta, self.b):
            out.update(_curve_breakpoints(c, lo, hi))
        return tuple(sorted(out))

    def _sample_times(self, n=512):
        ts = set(np.linspace(0.0, self.t_max, n))
        eps = 1e-9 * self.t_max
        for bp in self.breakpoints():
            ts.update((max(0.0, bp - eps), bp, min(self.t_max, bp + eps)))
        return np.array(sorted(ts))

    def validate(self):
        ts = self._sample_times()
        al = np.asarray([float(self.alpha(t)) for t in ts])
        th = np.asarray([float(self.theta(t)) for t in ts])
        bb = np.asarray([float(self.b(t)) for t in ts])
        if np.any(al <= 0.0) or np.any(al > 2.0):
            raise DomainError("alpha(t) must lie in (0, 2]")
        if np.any(np.abs(al - 1.0) < 1e-9):
            raise DomainError("alpha(t) = 1 is excluded")
        # a sign change of alpha-1 between samples is a crossing of 1
        if np.any((al[:-1] - 1.0) * (al[1:] - 1.0) < 0.0):
            raise DomainError("alpha(t) must not cross 1")
        if np.any(np.abs(th) > np.minimum(al, 2.0 - al) + _ADMISSIBLE_SLACK):
            raise DomainError("theta(t) must satisfy |theta| <= min(alpha, 2-alpha)")
        if np.any(bb <= 0.0):
            raise DomainError("b(t) must be positive")
        k = getattr(self.b, "k_bound", None)
        if k is not None:
            if not 0.0 < k < 1.0:
                raise DomainError("declared bound K must lie in (0, 1)")
            if np.any(bb >= k):
                raise DomainError("b(t) must stay strictly below its declared K")
        for c in (self.alpha, self.theta, self.b):
            self._check_continuity(c)
        return self

    def _check_continuity(self, curve):
        # within each declared piece, the max sampled increment must shrink
        # under 4x refinement; a hidden jump keeps it constant
        edges = (0.0,) + _curve_breakpoints(curve, 0.0, self.t_max) + (self.t_max,)
        for a, b in zip(edges, edges[1:]):
            if b - a <= 0:
                continue
            # stop short of b: pconst pieces are right-continuous, so the
            # value at the next breakpoint belongs to the next piece
            bb = b - 1e-9 * (b - a)
            coarse = np.asarray([float(curve(t)) for t in np.linspace(a, bb, 33)])
            fine = np.asarray([float(curve(t)) for t in np.linspace(a, bb, 129)])
            inc_c = np.abs(np.diff(coarse)).max()
            inc_f = np.abs(np.diff(fine)).max()
            scale = 1.0 + np.abs(fine).max()
            if inc_f > 0.6 * inc_c + 1e-12 * scale:
                raise DomainError(
                    "parameter curve jumps inside a piece; declare the "
                    "discontinuity as a breakpoint"
                )


# ---------------------------------------------------------------------------
# symbols


@dataclass(frozen=True)
class SymbolEval:
    """Evaluator of a characteristic exponent eta(xi, t).

    eval must be vectorized in xi and satisfy eta(0, t) = 0 and
    Re eta <= 0 for all t.
    """

    eval: object
    kind: str = "custom"
    breakpoints: tuple = ()

    def __post_init__(self):
        if self.kind not in SYMBOL_KINDS:
            raise DomainError(f"unknown symbol kind {self.kind!r}")


def _safe_log1p(w):
    """Principal log of 1 + w with a right-half-plane guard."""
    w = np.asarray(w, dtype=complex)
    if np.any(1.0 + w.real <= 0.0):
        raise DomainError("log argument 1 + b psi left the right half-plane")
    out = np.log1p(w)
    return complex(out) if out.ndim == 0 else out


def symbol_stable(alpha, theta):
    _check_stable_params(alpha, theta)
    return SymbolEval(eval=lambda xi, t: -psi(alpha, theta, xi), kind="stable")


def symbol_multistable(curves):
    def ev(xi, t):
        return -psi(float(curves.alpha(t)), float(curves.theta(t)), xi)

    return SymbolEval(eval=ev, kind="multistable", breakpoints=curves.breakpoints())


def symbol_gs1(curves):
    """-ln(1 + b psi_{alpha(t), theta(t)}(xi)) with constant scale b."""
    if not _is_constant(curves.b, curves.t_max):
        raise DomainError("this variant needs a constant scale b")
    b = float(curves.b(0.0))

    def ev(xi, t):
        return -_safe_log1p(b * psi(float(curves.alpha(t)), float(curves.theta(t)), xi))

    return SymbolEval(eval=ev, kind="gs1", breakpoints=curves.breakpoints())


def symbol_gs2(curves):
    """-ln(1 + b(t) psi_{alpha, theta}(xi)) with constant alpha, theta."""
    if not (_is_constant(curves.alpha, curves.t_max) and _is_constant(curves.theta, curves.t_max)):
        raise DomainError("this variant needs constant alpha and theta")
    a0 = float(curves.alpha(0.0))
    th0 = float(curves.theta(0.0))
    _check_stable_params(a0, th0)

    def ev(xi, t):
        return -_safe_log1p(float(curves.b(t)) * psi(a0, th0, xi))

    return SymbolEval(eval=ev, kind="gs2", breakpoints=curves.breakpoints())


def symbol_gamma_inhom(bcurve):
    bcurve = as_curve(bcurve)

    def ev(xi, t):
        return -np.log1p(-1j * float(bcurve(t)) * np.asarray(xi, dtype=float))

    return SymbolEval(
        eval=ev, kind="gamma_inhom", breakpoints=getattr(bcurve, "breakpoints", ())
    )


def symbol_vg_inhom(bcurve):
    bcurve = as_curve(bcurve)

    def ev(xi, t):
        x = np.asarray(xi, dtype=float)
        return -np.log1p(float(bcurve(t)) * x * x) + 0j

    return SymbolEval(
        eval=ev, kind="vg_inhom", breakpoints=getattr(bcurve, "breakpoints", ())
    )


def eta_gs1(curves, xi, t):
    """Exponent of the variant with varying (alpha, theta) and constant b."""
    return symbol_gs1(curves).eval(xi, t)


def eta_gs2(curves, xi, t):
    """Exponent of the variant with constant (alpha, theta) and varying b."""
    return symbol_gs2(curves).eval(xi, t)


# ---------------------------------------------------------------------------
# quadrature in time

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _panel(fvec, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    acc = 0.0 + 0.0j
    for node, w in zip(_GL_NODES, _GL_WEIGHTS):
        acc = acc + w * np.asarray(fvec(mid + half * node), dtype=complex)
    return half * acc


def _adaptive(fvec, a, b, tol, depth=0):
    whole = _panel(fvec, a, b)
    mid = 0.5 * (a + b)
    halves = _panel(fvec, a, mid) + _panel(fvec, mid, b)
    err = np.max(np.abs(halves - whole))
    if err <= tol or (b - a) < 1e-13:
        return halves
    if depth >= 24:
        raise QuadratureError(
            f"time quadrature did not converge on [{a}, {b}] (err={err:.2e})"
        )
    return _adaptive(fvec, a, mid, tol / 2, depth + 1) + _adaptive(
        fvec, mid, b, tol / 2, depth + 1
    )


def integrate_symbol(fvec, s, t, breakpoints=(), abs_tol=1e-10):
    """Integrate a vectorized function of time over [s, t].

    Subdivides at declared breakpoints, then refines adaptively to the
    absolute tolerance. fvec(tau) may return a scalar or a vector; the
    tolerance applies uniformly across components.
    """
    if t < s:
        raise DomainError("integration needs s <= t")
    if t == s:
        return np.asarray(fvec(s), dtype=complex) * 0.0
    edges = [s] + [bp for bp in sorted(breakpoints) if s < bp < t] + [t]
    total = None
    for a, b in zip(edges, edges[1:]):
        piece = _adaptive(fvec, a, b, abs_tol * (b - a) / (t - s))
        total = piece if total is None else total + piece
    return total


def accumulated_exponent(sym, s, t, xi, abs_tol=1e-10):
    """int_s^t eta(xi, tau) dtau, the log characteristic function of an
    increment over [s, t].

    Additive in the time interval to quadrature tolerance. Vectorized in xi.
    """
    if s < 0:
        raise DomainError("accumulated_exponent needs 0 <= s <= t")
    scalar = np.ndim(xi) == 0
    xv = np.atleast_1d(np.asarray(xi, dtype=float))
    out = integrate_symbol(
        lambda tau: sym.eval(xv, tau), s, t, breakpoints=sym.breakpoints, abs_tol=abs_tol
    )
    out = np.atleast_1d(out)
    return complex(out[0]) if scalar else out


def joint_cf(sym, times, xis):
    """Joint characteristic function at strictly increasing times.

    E exp(i sum_j xi_j X(t_j)) = exp(sum_j int_{t_{j-1}}^{t_j}
    eta(xi_j + ... + xi_m, tau) dtau) by independence of increments.
    """
    times = [float(t) for t in times]
    xis = [float(x) for x in xis]
    if len(times) != len(xis):
        raise DomainError("times and xis must have the same length")
    if not times:
        return 1.0 + 0.0j
    if times[0] <= 0 or any(b <= a for a, b in zip(times, times[1:])):
        raise DomainError("times must be strictly increasing and positive")
    total = 0.0 + 0.0j
    prev = 0.0
    for j, tj in enumerate(times):
        total += accumulated_exponent(sym, prev, tj, math.fsum(xis[j:]))
        prev = tj
    return complex(np.exp(total))


# ---------------------------------------------------------------------------
# scalar shadows of the logarithmic symbol


def log_symbol_resolvent(b, psival, abs_tol=1e-10):
    """Resolvent integral int_{1/b}^inf (1/tau) (-psi)/(tau + psi) dtau.

    Equals -ln(1 + b psi) exactly; evaluated here by quadrature as an
    independent route. Requires Re psi >= 0 and psi != 0.
    """
    from scipy.integrate import quad

    b = float(b)
    p = complex(psival)
    if b <= 0:
        raise DomainError("scale b must be positive")
    if p == 0:
        raise DomainError("psi value must be nonzero")
    if p.real < -_ADMISSIBLE_SLACK:
        raise DomainError("psi value must have nonnegative real part")

    # tau = e^u / b turns the interval into [0, inf) with exponential decay
    def integrand(u):
        if u > 700.0:
            return 0.0j
        return -p / (math.exp(u) / b + p)

    re, re_err = quad(lambda u: integrand(u).real, 0.0, np.inf,
                      epsabs=abs_tol, epsrel=1e-12, limit=400)
    im, im_err = quad(lambda u: integrand(u).imag, 0.0, np.inf,
                      epsabs=abs_tol, epsrel=1e-12, limit=400)
    if re_err + im_err > 100 * abs_tol + 1e-9:
        raise QuadratureError("resolvent quadrature did not converge")
    return complex(re, im)


def log_symbol_series(b, psival, N):
    """Partial sum sum_{n=1..N} (-1)^n (b psi)^n / n of -ln(1 + b psi).

    Converges only for |b psi| < 1; a divergence warning is issued
    otherwise and the (meaningless) partial sum is still returned.
    """
    b = float(b)
    p = complex(psival)
    N = int(N)
    if b <= 0:
        raise DomainError("scale b must be positive")
    if N < 1:
        raise DomainError("need at least one term")
    w = b * p
    if abs(w) >= 1.0:
        warnings.warn(
            f"power series diverges for |b psi| = {abs(w):.3f} >= 1",
            RuntimeWarning,
            stacklevel=2,
        )
    s = 0.0 + 0.0j
    term = 1.0 + 0.0j
    for n in range(1, N + 1):
        term = term * (-w)
        s += term / n
    return complex(s)
