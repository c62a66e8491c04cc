"""Exception types raised across the package."""


class TwinbeamError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(TwinbeamError, ValueError):
    pass


class DegenerateKernelError(TwinbeamError):
    """The sampled kernel is numerically zero and cannot be normalized."""


class DegeneratePulseError(TwinbeamError):
    pass


class ContractViolationError(TwinbeamError, ValueError):
    pass


class IncompatibleGridError(TwinbeamError, ValueError):
    pass


class NumericDomainError(TwinbeamError, ArithmeticError):
    pass


class UndefinedFractionError(TwinbeamError, ZeroDivisionError):
    pass


class NoInteriorPeakError(TwinbeamError):
    pass


class ConfigError(TwinbeamError, ValueError):
    """Raised for unknown keys, conflicting keys or out-of-range values."""
