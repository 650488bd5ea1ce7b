"""Exception hierarchy."""


class LatinQuotError(Exception):
    """Base class for all library errors."""


class PreconditionError(LatinQuotError, ValueError):
    """An input violates the preconditions of an operation."""


class InvariantError(LatinQuotError, RuntimeError):
    """An internal invariant failed; this indicates a bug, not bad input."""
