"""Exception types shared across the package."""


class FixcofeError(Exception):
    """Base class for all errors raised by fixcofe."""


class ValueOverflow(FixcofeError, ArithmeticError):
    """A computed value left the unsigned 64-bit range."""


class EnumerationCapExceeded(FixcofeError):
    """An exhaustive enumeration would produce more tables than allowed."""


class UnverifiedOperatorError(FixcofeError):
    """``fix`` was asked to iterate an operator with no contractiveness claim."""
