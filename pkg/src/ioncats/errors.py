"""Exception types shared across the package."""


class IonCatsError(Exception):
    """Base class for all package-specific errors."""


class TruncationError(IonCatsError):
    """The Fock-space truncation is too small for the requested operation."""


class UnsupportedOrder(IonCatsError):
    """Sideband/displacement order k beyond the configured maximum."""


class DegenerateOutcome(IonCatsError):
    """Post-selection outcome has (numerically) zero probability."""


class ConvergenceError(IonCatsError):
    """Numerical integration failed its step-halving convergence check."""


class ConfigError(IonCatsError):
    """Invalid run configuration (bad schema, unknown keys, bad values)."""
