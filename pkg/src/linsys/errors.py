"""Shared exception types."""
from __future__ import annotations


class ParseError(ValueError):
    """Syntax or validation error in user input, with a 1-based position
    when one is known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        if line is not None:
            message = f"line {line}, column {col}: {message}"
        super().__init__(message)
        self.line = line
        self.col = col


class GuardExceeded(RuntimeError):
    """An enumeration or search would exceed its documented size guard."""
