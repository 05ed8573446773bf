"""Exception types raised across the package."""


class NlsatError(Exception):
    """Base class for all package errors."""


class CapExceeded(NlsatError):
    """Instance too large for the requested backend or check."""


class BadWiring(NlsatError):
    """Gate qubit indices repeat, exceed the register, or mismatch the gate arity."""


class DegenerateCancellation(NlsatError):
    """Total destructive interference left (numerically) the zero vector."""


class NoZeros(DegenerateCancellation):
    """Oracle truth function has no accepted input."""


class BudgetExhausted(NlsatError):
    """Iterated drive did not reach its residual tolerance within max_steps."""


class ParseError(NlsatError):
    """Malformed DIMACS or circuit text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IntegrityError(NlsatError):
    """A measured outcome contradicts what the construction guarantees (simulator bug)."""
