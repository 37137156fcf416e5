"""Exception hierarchy shared by every module."""


class KvcertError(Exception):
    """Base class for all library errors."""


class DivisionByZero(KvcertError, ZeroDivisionError):
    """Division by a rational function that is identically zero."""


class UnknownVariable(KvcertError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unknown variable {self.name!r}"


class VariableMismatch(KvcertError, ValueError):
    """Operands live over different variable lists."""


class ParseError(KvcertError, ValueError):
    """Malformed expression text; ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class NegativeExponent(ParseError):
    pass


class ZeroDenominatorLiteral(ParseError):
    pass


class RankMismatch(KvcertError, ValueError):
    pass


class Degenerate(KvcertError, ValueError):
    """Determinant is identically zero."""


class SymmetryViolation(KvcertError, ValueError):
    pass


class PreconditionFailed(KvcertError, ValueError):
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class TheoremViolation(KvcertError, AssertionError):
    """Two independent evaluation routes disagreed.

    Raised by the always-on cross-checks; it indicates a bug or malformed
    input rather than a property of the structure being checked.
    """


class ValidationError(KvcertError, ValueError):
    pass


class UnknownTensorName(ValidationError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"no tensor named {self.name!r} in the document"


class VarianceMismatch(ValidationError):
    pass
