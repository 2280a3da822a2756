"""Exception types shared across the package."""


class ExcitonSimError(Exception):
    """Base class for all package errors."""


class InputError(ExcitonSimError, ValueError):
    """Invalid argument or malformed input data."""


class NumericError(ExcitonSimError, RuntimeError):
    """Linear-algebra failure (singular or ill-conditioned system)."""


class ConvergenceError(NumericError):
    """Time integration did not reach a steady state within the time budget."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConfigError(ExcitonSimError, ValueError):
    """Invalid CLI flags or config-file settings."""
