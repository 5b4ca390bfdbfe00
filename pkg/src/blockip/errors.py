"""Exception hierarchy shared by every blockip module."""

from __future__ import annotations


class BlockIPError(Exception):
    """Base class for all blockip errors."""


class ContractViolation(BlockIPError, ValueError):
    """A precondition of an operation does not hold (index mismatch, bad argument)."""


class ResourceLimitError(BlockIPError):
    """A configured budget, cap or node limit was exceeded."""

    def __init__(self, limit: str, value: int, message: str = ""):
        self.limit = limit
        self.value = value
        text = f"{limit} exceeded ({value})"
        if message:
            text += f": {message}"
        super().__init__(text)


class InternalInconsistency(BlockIPError, RuntimeError):
    """A computed result failed its own exact re-check."""


class InstanceParseError(BlockIPError, ValueError):
    """Positional error while reading an instance file."""

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")
