"""Exception hierarchy shared across the library."""


class GeoStableError(Exception):
    """Base class for all library errors."""


class DomainError(GeoStableError, ValueError):
    """Parameter or argument outside the admissible domain."""


class SeriesError(GeoStableError, ArithmeticError):
    """Series truncation criterion not met within k_max terms."""


class QuadratureError(GeoStableError, ArithmeticError):
    """Numerical quadrature failed to reach its tolerance."""


class AliasingError(GeoStableError, ValueError):
    """Spectral grid cannot resolve the requested characteristic function."""


class DecayError(GeoStableError, ValueError):
    """Grid function does not vanish at the edge of its window."""


class ConfigError(GeoStableError, ValueError):
    """Run configuration rejected before any computation."""


class InsufficientDataError(GeoStableError, ValueError):
    """Not enough samples or exceedances for the requested estimate."""
