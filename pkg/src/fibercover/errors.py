"""Exception hierarchy shared by the library and the command line."""

from __future__ import annotations


class FibercoverError(Exception):
    """Base class for every error raised by this package."""


class InvalidSpecError(FibercoverError, ValueError):
    """Input data violates a structural invariant.

    ``field`` names the offending location (``"monodromy[1]"``) when known.
    """

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class NumericalError(FibercoverError, ArithmeticError):
    """A numerical routine could not produce a trustworthy answer."""


class MagnitudeOverflowError(NumericalError, OverflowError):
    def __init__(self, message: str = "magnitude overflow"):
        super().__init__(message)


class StepUnderflowError(NumericalError):
    def __init__(self, message: str = "step underflow"):
        super().__init__(message)


class StartNotOnCurveError(NumericalError, ValueError):
    def __init__(self, message: str = "start not on curve"):
        super().__init__(message)


class CircleNotIsolatingError(NumericalError, ValueError):
    def __init__(self, message: str = "circle not isolating"):
        super().__init__(message)
