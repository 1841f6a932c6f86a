"""Exception hierarchy shared by every module."""


class MwkitError(Exception):
    """Base class for all library errors."""


class ParseError(MwkitError, ValueError):
    """Malformed graph, sequence or certificate text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(MwkitError, ValueError):
    """An operation was called on inputs outside its domain."""


class InvariantViolation(MwkitError, AssertionError):
    """An internal check backed by a proof failed.

    Raising this means either a bug or a counterexample to the underlying
    mathematics; it is never an expected outcome.
    """
