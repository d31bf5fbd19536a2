"""Exception types shared across the package."""

from __future__ import annotations


class MCIMError(Exception):
    """Base class for all package errors."""


class InvalidCombination(MCIMError, ValueError):
    """A parameter combination implies a probability outside (0, 1).

    ``values`` maps the name of each derived conditional probability to
    the value it took, so callers can report what went wrong.
    """

    def __init__(self, message: str, values: dict[str, float] | None = None):
        super().__init__(message)
        self.values = dict(values or {})


class RiskOutOfRange(MCIMError, ValueError):
    """Some cell risk Pr(Y=1 | E, C) of the outcome model exceeds 1."""


class DegenerateMechanism(MCIMError, ValueError):
    """A missingness mechanism has a zero observation probability."""


class DegenerateEstimate(MCIMError, ArithmeticError):
    """A ratio estimate is undefined because of empty or zero cells."""


class EmptyInput(MCIMError, ValueError):
    """An aggregation or rendering step received nothing to work on."""
