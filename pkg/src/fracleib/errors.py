"""Exception hierarchy shared by the whole package."""


class FracError(Exception):
    """Base class for every error raised by fracleib."""


class DomainError(FracError, ValueError):
    """An operator or function was applied outside its domain."""


class PoleError(DomainError):
    """Gamma function evaluated at a non-positive integer."""


class ToleranceError(FracError, ArithmeticError):
    """A numerical routine could not reach its requested tolerance."""


class ParseError(FracError, ValueError):
    """Malformed function or operator text.

    ``offset`` is the byte offset of the offending token in the input.
    """

    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} (at offset {offset})")
        self.message = message
        self.offset = offset
