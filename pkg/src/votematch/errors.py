"""Exception types shared across the package."""

from __future__ import annotations


class VotematchError(Exception):
    """Base class for all errors raised by votematch."""


class StructureError(VotematchError, ValueError):
    """Malformed input: mismatched candidate sets, unknown edge ids, bad endpoints."""


class ContractError(VotematchError, ValueError):
    """A documented precondition of an operation does not hold."""


class CapExceeded(VotematchError):
    """An exhaustive oracle refuses an instance above its size cap."""


class UnsupportedBackend(VotematchError):
    """The requested backend has no algorithm for this problem."""


class ParseError(VotematchError, ValueError):
    """Instance text could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
