"""Shared exception types."""


class LockstepError(Exception):
    """Base class for package errors."""


class ConstructionError(LockstepError):
    """A program or protocol instance is malformed."""


class UnsupportedParameterError(ConstructionError):
    """Parameters outside the range a constructor supports (for example an even
    room count where only odd ones work)."""


class UsageError(LockstepError):
    """Bad request at the CLI/service boundary: unknown identifiers, missing or
    contradictory options."""


class ResourceLimitError(LockstepError):
    """A bounded computation hit its node or size cap before finishing."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class HistoryCorruptionError(LockstepError):
    """An observed event sequence is inconsistent with any room assignment."""
