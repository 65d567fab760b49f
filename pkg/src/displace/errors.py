"""Exception types raised across the package."""


class DisplaceError(Exception):
    """Base class for all errors raised by this package."""


class EmptyVectorError(DisplaceError):
    """A scoring vector or segment was empty."""


class NotNonincreasingError(DisplaceError):
    """A sequence that must be nonincreasing was not.

    The first offending index (the position whose entry exceeds its
    predecessor's) is stored in ``index``.
    """

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"sequence increases at index {index}")


class LengthMismatchError(DisplaceError):
    """Two structures that must have equal length did not."""


class StepMismatchError(DisplaceError):
    """Ladders aggregated together disagreed on their step size."""


class BudgetOverflowError(DisplaceError):
    """Integer arithmetic would leave the safe 64-bit range."""


class LevelOutOfRangeError(DisplaceError):
    """A displacement level was outside [0, min(k, x - k)]."""


class EmptyBoundaryError(DisplaceError):
    """An operation requiring a positive displacement level got level 0."""


class SumsetTooLargeError(DisplaceError):
    """The iterated value sumset exceeded the configured size cap."""


class TooLargeError(DisplaceError):
    """A brute-force enumeration exceeded its guarded size."""


class InfeasibleInputError(DisplaceError):
    """An input violated a precondition that is checked up front."""


class NotRealizableError(DisplaceError):
    """An aggregate vector failed the realizability precondition."""


class InternalRealizationFailure(DisplaceError):
    """Both the greedy and the exact decomposition failed.

    For aggregates certified by the feasibility oracles this indicates a
    bug; it can also be reached by feeding an unrealizable aggregate that
    slips past the necessary conditions (see the oracle module notes on
    where the prefix-and-congruence test is exact).
    """


class NotCertifiedError(DisplaceError):
    """Ballot construction was asked for an uncertified (level, cutoff)."""


class InvalidDispersionError(DisplaceError):
    """A dispersion parameter was outside (0, 1]."""


class IncompleteRankingError(DisplaceError):
    """A preference line did not contain a complete strict ranking."""


class MalformedLineError(DisplaceError):
    """A preference file line could not be parsed.

    ``line_number`` is 1-based.
    """

    def __init__(self, line_number, message=None):
        self.line_number = line_number
        super().__init__(message or f"malformed line {line_number}")


class CountMismatchError(DisplaceError):
    """Declared and observed alternative counts disagree."""
