"""Exception types shared by every module."""


class InputError(ValueError):
    """Malformed or incompatible arguments."""


class ParseError(InputError):
    """A text format could not be read."""


class BoundError(RuntimeError):
    """A computation needed a slice outside the declared bounds."""

    def __init__(self, message: str, needed: dict | None = None):
        super().__init__(message)
        self.needed = dict(needed or {})


class NotAComplexError(ArithmeticError):
    """Two maps that were supposed to compose to zero did not."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ConsistencyError(RuntimeError):
    """An internal cross-check failed (e.g. a result left the span it must lie in)."""
