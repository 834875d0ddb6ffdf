"""Exception and warning types shared across the package."""

from __future__ import annotations


class PolySubmodError(Exception):
    """Base class for all errors raised by polysubmod."""


class DivByZero(PolySubmodError, ZeroDivisionError):
    pass


class NotDivisible(PolySubmodError, ArithmeticError):
    pass


class ZeroPolynomial(PolySubmodError, ValueError):
    pass


class AllZero(PolySubmodError, ValueError):
    pass


class PolySyntaxError(PolySubmodError, SyntaxError):
    """Malformed polynomial text; ``position`` is the 0-based offending offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class VariableIndexError(PolySubmodError, IndexError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ProductMismatch(PolySubmodError, ValueError):
    pass


class NotCoprime(PolySubmodError, ValueError):
    pass


class UndecidedStability(PolySubmodError):
    """The stability oracle could not decide a factor."""

    def __init__(self, factor, reason: str = ""):
        self.factor = factor
        self.reason = reason
        msg = f"stability of factor {factor} is undecided"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)


class InvalidBeurlingForm(PolySubmodError, ValueError):
    pass


class InvalidBeta(PolySubmodError, ValueError):
    pass


class AlphaNotInB(PolySubmodError, ValueError):
    pass


class PointOutOfDomain(PolySubmodError, ValueError):
    pass


class CapabilityWarning(UserWarning):
    """Emitted when an input exceeds what the engine can certify."""
