"""Exception hierarchy shared by every curled module."""

from __future__ import annotations


class CurledError(Exception):
    """Base class; carries an optional input line number for diagnostics."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


# -- hypergraph construction ------------------------------------------------

class DuplicateId(CurledError):
    pass


class SchemaMismatch(CurledError):
    pass


class UnknownVertex(CurledError):
    pass


class ArityTooSmall(CurledError):
    pass


# -- parsing ------------------------------------------------------------------

class ParseError(CurledError):
    pass


class UndeclaredType(ParseError):
    pass


class InvalidValue(ParseError):
    pass


# -- similarity ---------------------------------------------------------------

class TypeMismatch(CurledError):
    pass


class SignatureMismatch(CurledError):
    pass


class NoComparableComponent(CurledError):
    pass


class TooFewObjects(CurledError):
    pass


# -- clustering / selection ----------------------------------------------------

class InvalidK(CurledError):
    pass


class DegenerateMatrix(CurledError):
    pass


class MissingNeighbourValue(CurledError):
    pass


class InvalidPartition(CurledError):
    pass


class RangeTooSmall(CurledError):
    pass


# -- representation / pipeline ---------------------------------------------------

class UnknownGroup(CurledError):
    pass


class ModelNotFound(CurledError):
    pass


class TargetNotFound(CurledError):
    pass
