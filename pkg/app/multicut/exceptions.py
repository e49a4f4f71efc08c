class MulticutError(Exception):
    """Base class for solver errors."""


class InstanceFormatError(MulticutError, ValueError):
    """Raised when an instance stream or edge list is malformed."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class LabelingError(MulticutError, ValueError):
    """Raised when a labeling or fractional point does not fit its instance."""


class FactorError(MulticutError, ValueError):
    """Raised for invalid factor attachments or partial assignments."""


class OracleLimitError(MulticutError, ValueError):
    """Raised when an exhaustive reference routine exceeds its size cap."""


class SolverInvariantError(MulticutError, RuntimeError):
    """Raised when an internal solver invariant does not hold."""
