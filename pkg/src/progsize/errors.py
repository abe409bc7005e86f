"""Exception types raised across the package."""

from __future__ import annotations


class ProgsizeError(Exception):
    """Base class for every error this package raises on bad input."""


class EmptySample(ProgsizeError, ValueError):
    def __init__(self, what: str = "sample") -> None:
        super().__init__(f"empty {what}")


class DegenerateSample(ProgsizeError, ValueError):
    pass


class DomainError(ProgsizeError, ValueError):
    pass


class TooFewPoints(ProgsizeError, ValueError):
    pass


class BadRange(ProgsizeError, ValueError):
    pass


class UnknownLanguage(ProgsizeError, LookupError):
    pass


class DecodeError(ProgsizeError, ValueError):
    pass


class MissingHeader(ProgsizeError, ValueError):
    pass


class BadRow(ProgsizeError, ValueError):
    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class DuplicateId(ProgsizeError, ValueError):
    def __init__(self, ident: str, line: int | None = None) -> None:
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"duplicate id {ident!r}{where}")
        self.ident = ident
        self.line = line


class FormatMismatch(ProgsizeError, ValueError):
    pass


class MissingDefectData(ProgsizeError, ValueError):
    pass


class ZeroDefects(ProgsizeError, ValueError):
    pass


class NoConvergence(RuntimeWarning):
    """Emitted when an iterative fit stops at its iteration cap."""
