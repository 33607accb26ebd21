"""Shared exception hierarchy.

Every error raised by the library derives from NctopoError so callers (and
the CLI) can map failures to exit codes without string matching.
"""

from __future__ import annotations


class NctopoError(Exception):
    """Base class for all library errors."""


class DomainError(NctopoError, ValueError):
    """Input violates a documented precondition."""


class DimensionError(DomainError):
    """Mismatched sizes (ground sets, gradings, sequence lengths)."""


class SizeLimitError(DomainError):
    """Input exceeds a hard size cap; never silently truncated."""


class PosetOrderError(DomainError):
    """Partition pair is not ordered, or an element is outside the family."""


class UnsupportedKindError(DomainError):
    """Operation not defined for the requested cumulant kind."""


class CoverageError(DomainError):
    """A sample falls outside the supplied histogram bins."""


class ToleranceError(NctopoError, ArithmeticError):
    """A numerical result sits too close to a decision threshold."""


class NumericalError(NctopoError, ArithmeticError):
    """An iterative numerical routine failed to converge or validate."""


class ParseError(NctopoError, ValueError):
    """A structured text file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PartialResultError(SizeLimitError):
    """A grid computation hit a cap part-way; carries the completed prefix.

    ``partial`` holds whatever was finished before the failing step and
    ``failed_at`` identifies the offending grid value.
    """

    def __init__(self, message: str, partial, failed_at):
        self.partial = partial
        self.failed_at = failed_at
        super().__init__(message)
