"""Geometric stable processes with time-varying parameters.

Numerics for two inhomogeneous extensions of the geometric stable family
(index alpha(t) varying at constant scale, and scale b(t) varying at
constant index), the inhomogeneous gamma and variance-gamma processes they
subordinate, their characteristic exponents, densities, jump measures,
simulation schemes, and the associated evolution operators.
"""
from .errors import (
    AliasingError,
    ConfigError,
    DecayError,
    DomainError,
    GeoStableError,
    InsufficientDataError,
    QuadratureError,
    SeriesError,
)
from .specfun import log_gamma, mittag_leffler, recip_gamma_pair
from .symbols import (
    Curve,
    ParamCurves,
    SymbolEval,
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
    symbol_multistable,
    symbol_stable,
    symbol_vg_inhom,
)
from .transform import (
    SpectralGrid,
    cf_to_density,
    empirical_cf,
    gamma_inhom_moments,
    make_tail_report,
    mgf_gamma_inhom,
    stable_density,
    tail_asymptote_gs1,
    tail_constants_gs2,
    tail_prob_gilpelaez,
    tail_slope_fit,
)
from .levy import (
    laplace_exponent_check,
    levy_gamma_inhom,
    levy_gs1_sub,
    levy_gs2_oracle,
    levy_gs2_series,
    make_levy_density,
)
from .sampling import (
    RngStream,
    SamplePaths,
    gamma_inhom_sample,
    gs1_sample,
    gs2_sample,
    gs_homog_sample,
    multistable_sample,
    rescaled_gs_limit,
    save_paths,
    stable_sample,
    vg_inhom_sample,
)
from .propagator import (
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
from .acceptance import ACCEPTANCE_SEED, CriterionResult, run_acceptance

__version__ = "0.1.0"

__all__ = [
    "ACCEPTANCE_SEED",
    "AliasingError",
    "ConfigError",
    "CriterionResult",
    "Curve",
    "DecayError",
    "DomainError",
    "GeoStableError",
    "GridFunction",
    "InsufficientDataError",
    "ParamCurves",
    "RngStream",
    "SamplePaths",
    "SpectralGrid",
    "SymbolEval",
    "accumulated_exponent",
    "as_curve",
    "bump",
    "cf_to_density",
    "commute_check",
    "empirical_cf",
    "feller_to_polar",
    "gamma_inhom_moments",
    "gamma_inhom_sample",
    "gaussian_pulse",
    "generator_apply",
    "gs1_sample",
    "gs2_sample",
    "gs_homog_sample",
    "increment_density",
    "joint_cf",
    "jump_weights",
    "laplace_exponent_check",
    "levy_gamma_inhom",
    "levy_gs1_sub",
    "levy_gs2_oracle",
    "levy_gs2_series",
    "log_gamma",
    "log_symbol_resolvent",
    "log_symbol_series",
    "make_levy_density",
    "make_tail_report",
    "mgf_gamma_inhom",
    "mittag_leffler",
    "multistable_sample",
    "propagate",
    "psi",
    "QuadratureError",
    "recip_gamma_pair",
    "rescaled_gs_limit",
    "riesz_apply_quadrature",
    "run_acceptance",
    "save_paths",
    "selfadjoint_check",
    "SeriesError",
    "stable_density",
    "stable_sample",
    "symbol_gamma_inhom",
    "symbol_gs1",
    "symbol_gs2",
    "symbol_multistable",
    "symbol_stable",
    "symbol_vg_inhom",
    "tail_asymptote_gs1",
    "tail_constants_gs2",
    "tail_prob_gilpelaez",
    "tail_slope_fit",
    "vg_inhom_sample",
]
