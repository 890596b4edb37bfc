"""Error taxonomy shared by every layer.

Each class carries a stable ``code`` that the HTTP facade serializes
verbatim, so service clients see exactly one vocabulary of failures.
"""

from __future__ import annotations


class GameError(Exception):
    """Base class for all domain failures."""

    code = "io"

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.message = message
        self.field = field


class ValidationError(GameError):
    """Bad input values (out-of-range coordinate, malformed email, ...)."""

    code = "validation"


class AuthError(GameError):
    """Unknown credentials or missing/revoked token."""

    code = "auth"


class ConflictError(GameError):
    """Operation clashes with current state (quiz already active, ...)."""

    code = "conflict"


class SequenceError(GameError):
    """Out-of-order input: time regression or non-sequential answers."""

    code = "sequence"


class NotFoundError(GameError):
    """Referenced entity does not exist."""

    code = "not_found"


class ContentError(GameError):
    """Content pack cannot support the requested operation."""

    code = "content"


class StorageError(GameError):
    """Persistence failure; prior state is left intact."""

    code = "io"
