"""The module contains exceptions raised by the oracle models."""


class HamOracleError(ValueError):
    """Base class for errors of this project."""


class InvariantError(HamOracleError):
    """A type invariant does not hold."""


class DimensionError(HamOracleError):
    """Operands have inconsistent dimensions."""


class ConstraintError(HamOracleError):
    """Controls leave the disc b_j^2 + c_j^2 <= 1."""


class BracketError(HamOracleError):
    """Root bracketing failed."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = [] if trace is None else list(trace)


class BoundaryError(HamOracleError):
    """A point reached the singular set of the metric."""


class UnsupportedMeasurementError(HamOracleError):
    """The verifier family has no closed-form optimal measurement."""
