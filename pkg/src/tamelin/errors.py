"""Exception hierarchy shared by all modules."""
from __future__ import annotations


class TameError(Exception):
    """Base class for every error raised by tamelin."""


class FormulaSyntaxError(TameError, ValueError):
    """Malformed formula text. Carries 1-based ``line`` and ``column``."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class UnassignedVariableError(TameError, KeyError):
    def __init__(self, name: str) -> None:
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"free variable {self.name!r} has no assigned value"


class ResourceLimitError(TameError):
    """The atom budget of an elimination was exceeded."""


class ArityError(TameError, ValueError):
    """Point or set of the wrong ambient dimension."""


class PreconditionError(TameError, ValueError):
    """An operation was called outside of its documented domain."""


class EmptySetError(PreconditionError):
    pass
