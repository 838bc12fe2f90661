"""Exception types raised by the veracity toolkit."""

from __future__ import annotations


class VeracityError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(VeracityError):
    """An input file could not be parsed.

    Carries the source name and 1-based line number so the CLI can point the
    operator at the offending line.
    """

    def __init__(self, source: str, line: int | None, message: str):
        self.source = source
        self.line = line
        self.message = message
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")


class InvariantError(VeracityError):
    """An internal consistency check failed."""


class InsufficientDataError(VeracityError):
    """Not enough data to run the requested statistic."""
