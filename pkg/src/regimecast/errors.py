"""Exception hierarchy shared by every module."""


class RegimecastError(Exception):
    """Base class for toolkit errors."""


class SchemaError(RegimecastError):
    """A required column or feature is missing."""


class IntegrityError(RegimecastError):
    """Input data violates an invariant (duplicate dates, non-positive prices)."""


class SizeError(RegimecastError):
    """Input is too short or a split/window would be empty."""


class ShapeError(RegimecastError):
    """Array dimensions do not match what a fitted model expects."""


class DomainError(RegimecastError):
    """A value lies outside the domain of the operation (e.g. zero actual price)."""


class NumericError(RegimecastError):
    """Numerical failure such as a singular design matrix."""


class SingularMatrixError(NumericError):
    def __init__(self, column: int, message: str | None = None):
        self.column = column
        super().__init__(message or f"design matrix is rank deficient at column {column}")


class UndefinedCorrelationError(NumericError):
    """Autocorrelation requested for a zero-variance series."""


class TrainingError(RegimecastError):
    def __init__(self, epoch: int, loss: float):
        self.epoch = epoch
        self.loss = loss
        super().__init__(f"non-finite training loss {loss!r} at epoch {epoch}")
