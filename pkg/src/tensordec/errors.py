"""Exception hierarchy shared by all modules.

Each class carries an ``exit_code`` used by the command line front end.
"""


class TensorDecError(Exception):
    exit_code = 1

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details


class DomainError(TensorDecError, ValueError):
    """Operands from different fields or rings, or an argument out of range."""


class SmallCharacteristicError(DomainError):
    """Falling factorials are not invertible in the given characteristic."""


class ParseError(TensorDecError, ValueError):
    exit_code = 4


class CriterionFailed(TensorDecError):
    """A runtime check of an identifiability criterion did not hold."""

    exit_code = 2


class BoundExceeded(CriterionFailed):
    pass


class NotADecomposition(CriterionFailed):
    """The coefficient system of the recovered forms is inconsistent."""


class NotIdentifiable(CriterionFailed):
    pass


class RecoveryFailed(TensorDecError):
    exit_code = 2


class NotPurePower(RecoveryFailed):
    pass


class NotRankOne(RecoveryFailed):
    pass


class MethodFailed(TensorDecError):
    exit_code = 2


class NoKnownEquations(TensorDecError):
    exit_code = 2


class PositiveDimensional(TensorDecError):
    exit_code = 2


class NonRationalPoints(TensorDecError):
    exit_code = 2


class UnderdeterminedError(TensorDecError):
    exit_code = 2

    def __init__(self, message="", kernel_dim=0, **details):
        super().__init__(message, kernel_dim=kernel_dim, **details)
        self.kernel_dim = kernel_dim


class DegenerateInput(TensorDecError):
    exit_code = 3


class DegenerateCoordinates(TensorDecError):
    exit_code = 3


class UnluckyChart(TensorDecError):
    exit_code = 3


class TimeLimitExceeded(TensorDecError):
    exit_code = 5
