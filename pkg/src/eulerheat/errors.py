"""Exception types shared across the package."""


class EulerHeatError(Exception):
    """Base class for all package errors."""


class DomainError(EulerHeatError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(EulerHeatError, ZeroDivisionError):
    """Evaluation at (or numerically on top of) a pole or singular locus."""


class ConvergenceError(EulerHeatError, ArithmeticError):
    """An iteration or series failed to converge within its budget."""


class InstabilityError(EulerHeatError, ArithmeticError):
    """A time integration produced non-finite values."""


class ConfigError(EulerHeatError, ValueError):
    """Invalid or incomplete run configuration."""
