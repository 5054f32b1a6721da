"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class BratteliError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(BratteliError, ValueError):
    """Raw diagram data violates a structural invariant.

    ``matrix`` and ``row`` locate the offending entry when known, so that the
    file parser can map the failure back to a line of input.
    """

    def __init__(self, message: str, *, matrix: int | None = None, row: int | None = None):
        super().__init__(message)
        self.matrix = matrix
        self.row = row

    @property
    def kind(self) -> str:
        return type(self).__name__


class EmptyDiagram(ValidationError):
    pass


class NonUnitalRoot(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class ZeroRow(ValidationError):
    pass


class NonSquareTail(ValidationError):
    pass


class BadEntry(ValidationError):
    pass


class InvalidOrder(ValidationError):
    pass


class LevelOutOfRange(BratteliError, IndexError):
    pass


class UnsortedKeepList(BratteliError, ValueError):
    pass


class MissingRoot(BratteliError, ValueError):
    pass


class BadParam(BratteliError, ValueError):
    pass


class BoundTooSmall(BratteliError, ValueError):
    pass


class NotUHFShape(BratteliError, ValueError):
    pass


class NotStationary(BratteliError, ValueError):
    pass


class NotPrimitive(BratteliError, ValueError):
    pass


class InvalidPath(BratteliError, ValueError):
    pass


class BadRank(BratteliError, ValueError):
    pass


class BadDepth(BratteliError, ValueError):
    pass


class Disconnected(BratteliError, ValueError):
    pass


class ParseError(BratteliError, ValueError):
    """Malformed ``.bd`` input, positioned at a 1-based line and column."""

    def __init__(self, line: int, column: int, message: str, kind: str = "Syntax"):
        super().__init__(f"line {line}, column {column}: {kind}: {message}")
        self.line = line
        self.column = column
        self.kind = kind
        self.detail = message
