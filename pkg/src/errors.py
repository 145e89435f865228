"""
Exception hierarchy for motag-recon.

Library code raises these; the CLI maps each class to a process exit code.
"""


class MotagError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ParameterError(MotagError, ValueError):
    """Raised when model parameters or operation preconditions are invalid."""

    exit_code = 2


class PrecisionError(MotagError):
    """Raised when a computed distribution drifts beyond its normalization tolerance."""

    exit_code = 3


class ValidityError(MotagError):
    """Raised when an approximation is evaluated outside its regime."""

    exit_code = 3


class SingularityError(MotagError):
    """Raised when a balance-equation system cannot be solved reliably."""

    exit_code = 3


class SamplingError(MotagError):
    """Raised when a rejection sampler exhausts its iteration cap."""

    exit_code = 3


class ConfigError(MotagError):
    """
    Raised when a scenario file or override fails to parse or validate.

    Attributes:
        line: 1-based source line of the offending entry, if known
    """

    exit_code = 4

    def __init__(self, message: str, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
