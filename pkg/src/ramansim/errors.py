"""Exception hierarchy shared across the package."""


class RamanSimError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(RamanSimError):
    """Invalid configuration value, grid, or parameter record."""


class SingularityError(RamanSimError):
    """Evaluation requested too close to a pole of an analytic expression."""


class NonConvergenceError(RamanSimError):
    """A numerical quadrature failed to reach the requested tolerance.

    Carries the best available estimate so callers can inspect how far
    the refinement got before giving up.
    """

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class DegenerateInputError(RamanSimError):
    """Input carries no information for the requested decomposition."""


class MultiModalMarginalError(RamanSimError):
    """A marginal has no single dominant feature, so its FWHM is ambiguous."""
