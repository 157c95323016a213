"""Exception hierarchy shared by every module of the package."""


class AltSumError(Exception):
    """Base class for all package errors."""


class ArgumentError(AltSumError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(ArgumentError):
    """A mathematical function was called outside its domain."""


class PoleError(DomainError):
    """A summand family was requested at a pole of its antiderivative."""


class SpotCheckError(ArgumentError):
    """A user-supplied antiderivative failed the F' = f spot check."""


class CapabilityError(AltSumError):
    """The requested engine needs data the function spec does not provide."""


class PlanningError(AltSumError):
    """No admissible (m, c) plan could be found."""


class AccuracyError(AltSumError):
    """Repeated runs at increasing precision did not agree."""


class PartitionError(ArgumentError):
    """Too many workers for the given stabilizer order.

    ``max_workers`` carries the largest admissible worker count.
    """

    def __init__(self, message, max_workers):
        super().__init__(message)
        self.max_workers = max_workers
