"""
Error hierarchy for the rampcast application.

Every error raised on purpose by the services derives from RampcastError so
management commands can turn it into a one-line diagnostic. Most errors also
subclass the matching built-in (ValueError / RuntimeError) so library callers
can catch them the usual way.
"""

from typing import Optional, Sequence


class RampcastError(Exception):
    """Base class for all rampcast domain errors."""


class SpacingError(RampcastError, ValueError):
    """Timestamps are not uniformly spaced at the expected interval."""

    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(message)
        self.row = row


class SampleError(RampcastError, ValueError):
    """A wind-speed sample is negative, NaN or unparseable."""

    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(message)
        self.row = row


class SizeError(RampcastError, ValueError):
    """Input is too short for the requested operation."""


class DomainError(RampcastError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ShapeError(RampcastError, ValueError):
    """Array lengths or dimensionalities do not match."""


class ConvergenceError(RampcastError, RuntimeError):
    """An iterative solver stopped before reaching its KKT tolerance."""

    def __init__(self, message: str, iterations: int = 0, violation: float = float('nan')):
        super().__init__(f"{message} (iterations={iterations}, violation={violation:.3e})")
        self.iterations = iterations
        self.violation = violation


class SingularError(RampcastError, RuntimeError):
    """The LS-SVR saddle-point system could not be solved."""


class SearchError(RampcastError, RuntimeError):
    """Every candidate of a hyperparameter grid failed to fit."""

    def __init__(self, message: str, failures: Sequence[str] = ()):
        details = '; '.join(failures[:5])
        if len(failures) > 5:
            details += f'; ... ({len(failures) - 5} more)'
        super().__init__(f"{message}: {details}" if details else message)
        self.failures = list(failures)


class ConfigError(RampcastError, ValueError):
    """An experiment configuration key is missing, unknown or malformed."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key
