"""Exception types shared across the package."""


class ChoreDivisionError(Exception):
    """Base class for all domain errors."""


class WeightSumError(ChoreDivisionError):
    """Entitlements do not sum to exactly 1."""


class NonPositiveWeight(ChoreDivisionError):
    """An entitlement is zero, negative, or greater than 1."""


class NegativeCost(ChoreDivisionError):
    """A cost matrix entry is negative."""


class DimensionMismatch(ChoreDivisionError):
    """Cost matrix shape disagrees with the declared agents/chores."""


class NonPositiveFactor(ChoreDivisionError):
    """A cost scaling factor is zero or negative."""


class SizeLimitExceeded(ChoreDivisionError):
    """n^m exceeds the configured enumeration cap."""


class IncompleteSortedAssignment(ChoreDivisionError):
    """Assignment passed to map_back does not cover every chore."""


class NonIntegralCopyCount(ChoreDivisionError):
    """2*w_i/w_minp is not an integer; the entitlement rounding step was skipped."""


class PreconditionViolation(ChoreDivisionError):
    """Solver input does not satisfy a required reduction precondition."""


class NoAffordableAgent(ChoreDivisionError):
    """No remaining copy can afford the current knife interval."""


class SafetyViolation(ChoreDivisionError):
    """A runtime safety measure failed; carries the failing check and trace."""

    def __init__(self, message, check=None, trace=None):
        super().__init__(message)
        self.check = check
        self.trace = trace


class InvalidGrouping(ChoreDivisionError):
    """Grouping does not partition the agents or has non-distinct representatives."""
