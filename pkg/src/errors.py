"""
Error types for the recurrent-sums toolkit.

Every error carries the process exit code the command-line front end reports
for it: 2 for invalid input, 3 for a failed identity, 4 for a resource guard.
"""

from typing import Optional


class RecurrentSumError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class InvalidInputError(RecurrentSumError, ValueError):
    """A precondition of an operation was violated."""

    exit_code = 2


class DomainError(InvalidInputError):
    """A sequence was evaluated at an index outside its domain."""


class SequenceRangeError(InvalidInputError, IndexError):
    """A tabulated sequence was read outside its stored range."""


class ResourceGuardError(RecurrentSumError):
    """A configured size guard would be exceeded by the requested work."""

    exit_code = 4

    def __init__(self, what: str, requested: int, guard: int):
        self.what = what
        self.requested = requested
        self.guard = guard
        super().__init__(f"{what}: {requested:,} exceeds the configured guard of {guard:,}")


class IdentityCheckError(RecurrentSumError):
    """Two quantities that must be equal were found to differ."""

    exit_code = 3

    def __init__(self, message: str, lhs: Optional[object] = None, rhs: Optional[object] = None):
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(message)
