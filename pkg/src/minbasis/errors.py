"""Exception types shared across the package."""

from __future__ import annotations


class MinBasisError(Exception):
    """Base class for all errors raised by this package."""


class InputFormatError(MinBasisError, ValueError):
    """Malformed input data (bad JSON schema, ragged arrays, wrong counts)."""


class FieldMismatchError(MinBasisError, ValueError):
    """Operation mixing a real-field and a complex-field polynomial matrix."""


class ShapeError(MinBasisError, ValueError):
    """Incompatible matrix dimensions or grades."""


class PreconditionError(MinBasisError, ValueError):
    """An operation's stated precondition does not hold for the input."""


class LeadingCoefficientError(PreconditionError):
    """The leading coefficient is rank deficient where full rank is required."""


class NotFullNormalRankError(PreconditionError):
    """The matrix does not have full row normal rank.

    Carries ``stabilized_rank``, the rank the Sylvester increments (or the
    evaluation cross-check) settled at.
    """

    def __init__(self, message: str, stabilized_rank: int | None = None):
        super().__init__(message)
        self.stabilized_rank = stabilized_rank


class AdmissibilityError(PreconditionError):
    """Perturbation norm exceeds the admissible radius.

    Carries both sides of the violated inequality.
    """

    def __init__(self, message: str, applied_norm: float, admissible_radius: float):
        super().__init__(message)
        self.applied_norm = applied_norm
        self.admissible_radius = admissible_radius


class NumericalInconsistencyError(MinBasisError, ArithmeticError):
    """Internally contradictory numerical results (tolerance breakdown)."""


class PropertyViolationError(MinBasisError, AssertionError):
    """A mathematically guaranteed property failed to hold numerically."""
