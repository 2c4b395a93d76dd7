"""Exception and warning types shared across the package."""


class CslradError(Exception):
    """Base class for all errors raised by cslrad."""


class DomainError(CslradError, ValueError):
    """An argument lies outside the domain of the operation."""


class ToleranceError(CslradError, ArithmeticError):
    """A numerical routine failed to reach its tolerance.

    The best estimate reached so far is kept on the exception so callers can
    decide whether it is still usable.
    """

    def __init__(self, message, estimate=None, error_estimate=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class SolverError(CslradError, ArithmeticError):
    """The radial ODE solve did not produce an acceptable solution."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SingularityError(CslradError, ArithmeticError):
    """An energy denominator changes sign inside the integration support."""


class ConfigError(CslradError, ValueError):
    """Invalid run configuration. ``path`` names the offending key."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class RegimeWarning(UserWarning):
    """A formula is being evaluated outside the regime where it is valid."""
