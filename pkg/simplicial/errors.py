"""Exception hierarchy for the simplicial sampler."""
from typing import Optional


class SimplicialError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(SimplicialError, ValueError):
    """Bad dimension, shape mismatch or out-of-range parameter."""


class NotPositiveDefiniteError(InvalidArgumentError):
    """A matrix that must be symmetric positive definite is not."""


class InvalidStartError(InvalidArgumentError):
    """Chain started at a point with non-finite target log-density."""


class ImpossibleStateError(SimplicialError, RuntimeError):
    """Every candidate has zero density, which a valid chain never produces."""


class UndefinedEssError(SimplicialError, ValueError):
    """Effective sample size requested for a constant or too-short series."""


class ConfigError(SimplicialError, ValueError):
    """Experiment configuration is malformed."""


class ResultsError(SimplicialError, OSError):
    """Result files could not be written or read."""


class DatasetError(SimplicialError, ValueError):
    """Dataset file does not conform to its schema."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.row = row
        self.column = column
