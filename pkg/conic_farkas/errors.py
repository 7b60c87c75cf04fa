"""
Exception hierarchy for conic_farkas.
"""


class ConicFarkasError(Exception):
    """Base class for every error raised by this package."""


class InstanceError(ConicFarkasError):
    """The instance file or one of its parts failed validation."""


class MalformedInstance(InstanceError):
    """JSON could not be decoded or does not match the instance schema."""


class IntegralityError(InstanceError):
    """A matrix or right-hand-side entry that must be integral is not."""


class DimensionError(InstanceError):
    """Vector, matrix or cone dimensions disagree."""


class PointednessError(InstanceError):
    """A polyhedral cone block is not pointed (rank(M) < dim)."""


class UnsupportedCone(ConicFarkasError):
    """The requested operation has no exact construction for this cone."""


class BudgetExceeded(ConicFarkasError):
    """A configured work cap was exceeded; results would be incomplete."""


class EnumerationBudget(BudgetExceeded):
    """The brute-force oracle would enumerate more points than allowed."""


class RecursionBudgetExceeded(BudgetExceeded):
    """The doubling memo grew past its cap."""


class RhsCapExceeded(BudgetExceeded):
    """The right-hand-side set has more points than the configured cap."""


class BoundUnavailable(ConicFarkasError):
    """No certified stopping iteration and no user-supplied kbar."""


class InconsistentState(ConicFarkasError):
    """Both or neither branch of the alternative validated."""
