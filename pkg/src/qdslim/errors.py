"""
Exception hierarchy for qdslim.
Every error raised by the library derives from QdslimError so the CLI can map
computational failures to exit code 1 in one place.
"""

from typing import Optional


class QdslimError(Exception):
    """Base class for all qdslim errors."""


class InvalidDimensionError(QdslimError, ValueError):
    """A truncation dimension or bipartition is not acceptable."""


class ShapeMismatchError(QdslimError, ValueError):
    """Operands live on spaces of different dimension."""


class DomainError(QdslimError, ValueError):
    """A function was evaluated outside its domain."""

    def __init__(self, message: str, value: Optional[float] = None):
        super().__init__(message)
        self.value = value


class InvalidParameterError(QdslimError, ValueError):
    """A model or bound parameter violates its stated range."""


class UnknownPresetError(QdslimError, ValueError):
    """No Lindblad preset with the requested name."""


class SpectrumFormatError(QdslimError, ValueError):
    """A spectrum name or spectrum file could not be parsed."""


class TruncationError(QdslimError, ValueError):
    """The truncation is too small for the requested accuracy."""

    def __init__(self, message: str, required_dim: Optional[int] = None):
        if required_dim is not None:
            message = f"{message} (try dim >= {required_dim})"
        super().__init__(message)
        self.required_dim = required_dim


class DimensionLimitError(QdslimError, ValueError):
    """A dense superoperator would exceed the hard size limit."""


class InfeasibleConstraintError(QdslimError, ValueError):
    """No state satisfies the energy constraint on this truncation."""


class InfeasibleEnergyError(QdslimError, ValueError):
    """The requested energy is not above the bottom of the spectrum."""


class ConvergenceError(QdslimError, ArithmeticError):
    """A series or root-finder did not reach its tolerance within budget."""


class BudgetExceededError(QdslimError, ArithmeticError):
    """An enumeration would exceed its configured budget."""


class TimeWindowError(QdslimError, ValueError):
    """A bound was requested outside the time window where it holds."""

    def __init__(self, message: str, max_dt: float):
        super().__init__(f"{message} (max admissible dt = {max_dt:.6g})")
        self.max_dt = max_dt
