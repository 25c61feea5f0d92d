"""Error taxonomy. Every public failure maps to exactly one tag."""

from __future__ import annotations


class BoostError(Exception):
    """Base class for all trustboost errors.

    ``tag`` is a stable machine-readable identifier; ``row``/``column`` carry
    optional coordinates for data-shaped failures (1-based).
    """

    tag = "Domain"

    def __init__(self, message: str, *, row: int | None = None, column: int | None = None):
        super().__init__(message)
        self.message = message
        self.row = row
        self.column = column


class DomainError(BoostError):
    """Invalid argument or invalid value (non-finite input, bad shape, bad label)."""

    tag = "Domain"


class HessianNotPositiveError(BoostError):
    """A Newton-style method hit a non-positive quadratic coefficient."""

    tag = "HessianNotPositive"


class InfeasibleRadiusError(BoostError):
    """A step denominator b + mu (or B + alpha*n + beta) is not positive."""

    tag = "InfeasibleRadius"


class UndefinedMetricError(BoostError):
    """Metric undefined for the given inputs (e.g. AUC on single-class labels)."""

    tag = "UndefinedMetric"


class DataIOError(BoostError):
    """File could not be read or written."""

    tag = "Io"


class SchemaError(BoostError):
    """Model file or input does not match the expected schema."""

    tag = "Schema"
