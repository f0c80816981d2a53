"""Shared verdicts and error types."""

from __future__ import annotations

import enum


class Verdict(enum.Enum):
    """Three-valued outcome of an equality decision."""

    EQUAL = "Equal"
    NOT_EQUAL = "NotEqual"
    UNDECIDED = "Undecided"

    def __str__(self) -> str:
        return self.value

    def __bool__(self) -> bool:
        # Guard against `if verdict:` silently treating Undecided as truth.
        raise TypeError("Verdict is three-valued; compare against Verdict members")


class FieldMismatchError(ValueError):
    """Operands belong to different fields."""


class ParseError(ValueError):
    """Syntax error, with a character position when available."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class MembershipError(ValueError):
    """A required ideal-membership or compatibility certificate failed."""


class InhomogeneousError(ValueError):
    """An operation demanded a graded-homogeneous expression."""
