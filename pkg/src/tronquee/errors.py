"""Exception types raised by the numeric and exact routines.

Everything derives from :class:`ComputationError` so the command line can map
any failure of a computation to exit status 1.
"""


class ComputationError(Exception):
    """Base class for failures of a well-formed computation."""


class DomainError(ComputationError, ValueError):
    pass


class PrecisionRangeError(ComputationError):
    """Argument lies outside the range certified at the requested precision."""


class NumericOverflowError(ComputationError, OverflowError):
    pass


class DataError(ComputationError, ValueError):
    pass


class StructuralError(ComputationError):
    """A recurrence hit a vanishing indicial factor."""


class DegeneracyError(ComputationError):
    """Singular linear system (e.g. a Pade normal system)."""


class InconclusiveError(ComputationError):
    pass


class ContourError(ComputationError):
    """An integration path passes too close to a singularity."""


class SignalUnderflowError(ComputationError):
    pass


class BranchError(ComputationError):
    """Evaluation requested exactly on a branch cut."""


class TracingError(ComputationError):
    pass


class ConsistencyError(ComputationError):
    """Two independent evaluations of the same object disagree."""


class PoleEncountered(ComputationError):
    """Raised when a Taylor step would cross a movable pole."""

    def __init__(self, message, location=None, state=None):
        super().__init__(message)
        self.location = location
        # (x, y, y') at the last accepted point, so callers can resume
        self.state = state
