"""Exception hierarchy shared by the library and the command line front end."""

from __future__ import annotations


class AffCrystError(Exception):
    """Base class for all library errors."""


class DocumentError(AffCrystError, ValueError):
    """Malformed or unrecognized input document (CLI exit code 2)."""


class InvariantError(AffCrystError, ValueError):
    """An input violates a precondition or a structural invariant (CLI exit code 3)."""


class FieldMismatchError(InvariantError):
    """Arithmetic attempted between two different quadratic fields."""


class JacobiError(InvariantError):
    def __init__(self, triple: tuple[int, int, int]):
        self.triple = triple
        i, j, k = triple
        super().__init__(f"Jacobi identity fails on basis triple ({i + 1}, {j + 1}, {k + 1})")


class NotNilpotentError(InvariantError):
    pass


class HomomorphismError(InvariantError):
    """Bracket compatibility fails on a pair of basis vectors."""

    def __init__(self, pair: tuple[int, int], message: str | None = None):
        self.pair = pair
        i, j = pair
        super().__init__(message or f"bracket compatibility fails on pair ({i + 1}, {j + 1})")


class SearchExhaustedError(AffCrystError):
    """A deterministic parameter search ran out of candidates."""

    def __init__(self, message: str, tried: list):
        self.tried = tried
        super().__init__(message)


class RelationError(AffCrystError):
    def __init__(self, word: tuple[int, ...], residual):
        self.word = word
        self.residual = residual
        super().__init__(f"relation {list(word)} does not evaluate to the identity")


class InternalInvariantError(AffCrystError, RuntimeError):
    """Something that cannot happen for valid inputs did happen (CLI exit code 4)."""
