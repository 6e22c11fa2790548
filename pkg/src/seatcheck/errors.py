"""Exception hierarchy shared by all seatcheck modules."""


class SeatcheckError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(SeatcheckError):
    """Malformed input: bad tables, unknown states, inconsistent files."""


class UnsupportedOperationError(SeatcheckError):
    """Operation not defined for the given semiring backend."""


class EvaluationError(SeatcheckError):
    """Formula refers to an unknown proposition or unresolvable literal."""


class ParseError(SeatcheckError):
    """Formula syntax error, with position information."""

    def __init__(self, message, line=1, column=0):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class BudgetError(SeatcheckError):
    """Combinatorial budget exhausted; carries the partial count."""

    def __init__(self, message, partial=0):
        super().__init__(message)
        self.partial = partial


class GenerationError(SeatcheckError):
    """Random structure generation could not satisfy the constraints."""


class InternalError(SeatcheckError):
    """Invariant violation inside the package (a bug, not a user error)."""


class LaxZeroWarning(UserWarning):
    """Operation relies on zero laws that the lax-zero semiring skips."""
