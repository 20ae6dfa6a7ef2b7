"""Exception taxonomy shared across the package."""


class BilopError(Exception):
    """Base class for all package errors."""


class InvalidInputError(BilopError, ValueError):
    """Inputs violate a precondition (wrong grid, wrong shape, bad value)."""


class InvalidExponentError(InvalidInputError):
    """Lebesgue exponent outside [1, inf]."""


class DomainError(BilopError, ValueError):
    """Request outside the operation's domain (on-diagonal kernel, oversized scale)."""


class BudgetError(BilopError):
    """Cost budget exceeded; the message says how to shrink the request."""


class ToleranceError(BilopError):
    """A convergence guard failed; carries both conflicting values."""

    def __init__(self, message, coarse=None, fine=None):
        super().__init__(message)
        self.coarse = coarse
        self.fine = fine


class SymbolParseError(BilopError, ValueError):
    """Malformed symbol expression; offset is 1-based into the source bytes."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class ConfigError(BilopError):
    """Bad run configuration; path points at the offending JSON key."""

    def __init__(self, message, path=""):
        super().__init__(f"{message}" + (f" (at {path})" if path else ""))
        self.path = path
