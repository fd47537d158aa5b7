"""Exception types raised by the simulator and the security calculator."""


class DecoyStateError(Exception):
    """Base class for every error the command line maps to exit code 1."""


class ConfigurationError(DecoyStateError):
    pass


class DomainError(DecoyStateError, ValueError):
    pass


class DimensionError(DecoyStateError, ValueError):
    pass


class InfeasibleAdversaryError(DecoyStateError):
    pass


class EstimateUnavailableError(DecoyStateError):
    pass


class MergeError(DecoyStateError):
    pass


class UndefinedQuantityError(DecoyStateError, ArithmeticError):
    pass


class UnboundedRatioError(DecoyStateError, ArithmeticError):
    pass
