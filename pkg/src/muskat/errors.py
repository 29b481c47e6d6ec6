"""Exception types shared across the package."""


class MuskatError(Exception):
    """Base class for all package errors."""


class ConfigurationError(MuskatError):
    """Invalid grid, quadrature, or simulation configuration."""


class PreconditionError(MuskatError):
    """An operation was called outside its admissible input range."""


class InvariantViolationError(MuskatError):
    """A structural invariant (symmetry, realness, finiteness) is broken."""


class BlowUpError(MuskatError):
    """Time integration produced NaN/Inf state.

    Carries the last valid trajectory record so callers can dump a
    diagnostic snapshot.
    """

    def __init__(self, message, record=None):
        super().__init__(message)
        self.record = record


class DivergentNormError(MuskatError):
    """A requested norm integral does not converge for the given profile."""
