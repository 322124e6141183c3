"""Exception types raised by the engine."""


class QesError(Exception):
    """Base class for all engine errors."""


class UsageError(QesError):
    """Bad call or bad input (registry mismatch, unknown variable, reserved name)."""


class ParseError(UsageError):
    def __init__(self, message, line=1, column=1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class PreconditionError(QesError):
    """An operation was called on input that violates its precondition."""


class InternalError(QesError):
    """An invariant of the pipeline itself failed (indicates a bug)."""


class VerificationError(QesError):
    """An eigenpair failed exact or numeric verification."""


class BudgetExceeded(QesError):
    """The Groebner engine hit its pair-count or term-count cap."""

    def __init__(self, message, pairs=0, basis_size=0, max_terms=0):
        self.pairs = pairs
        self.basis_size = basis_size
        self.max_terms = max_terms
        super().__init__(
            f"{message} (pairs processed={pairs}, basis size={basis_size}, "
            f"largest polynomial={max_terms} terms)"
        )
