"""Exception hierarchy.

The CLI maps each family onto a stable exit code, so solvers raise the most
specific class that applies.
"""

from __future__ import annotations


class AvoidError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class ParameterError(AvoidError, ValueError):
    exit_code = 2


class DimensionMismatchError(ParameterError):
    pass


class ParseError(ParameterError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(ParameterError):
    pass


class StretchError(AvoidError):
    """The instance does not have enough outputs for the requested solver."""

    exit_code = 3


class LocalityError(StretchError):
    """An output reads more inputs than the solver supports."""


class BudgetError(AvoidError):
    """An enumeration or branching budget would be exceeded."""

    exit_code = 4


class VerificationError(AvoidError):
    exit_code = 5
