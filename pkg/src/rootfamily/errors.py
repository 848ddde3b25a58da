"""Exception hierarchy shared by every layer of the package."""


class RootFamilyError(Exception):
    """Base class for all errors raised by this package."""


# numeric core

class NumericError(RootFamilyError, ArithmeticError):
    pass


class DivisionByZero(NumericError, ZeroDivisionError):
    pass


class DomainError(NumericError, ValueError):
    pass


class Overflow(NumericError, OverflowError):
    pass


# expression parsing / evaluation

class ParseError(RootFamilyError, ValueError):
    """Malformed expression or literal.

    ``offset`` is the byte offset into the UTF-8 encoded input where parsing
    stopped and ``expected`` describes what would have been accepted there.
    """

    def __init__(self, message, offset=0, expected=""):
        super().__init__(f"{message} at offset {offset}" + (f" (expected {expected})" if expected else ""))
        self.offset = offset
        self.expected = expected


class NonIntegerExponent(ParseError):
    pass


class EvaluationError(RootFamilyError, ArithmeticError):
    """Failure while propagating a jet through an expression.

    ``cause`` is the underlying numeric error, ``subtree`` the offending node.
    """

    def __init__(self, cause, subtree=None):
        where = f" in {subtree}" if subtree is not None else ""
        super().__init__(f"{type(cause).__name__}: {cause}{where}")
        self.cause = cause
        self.subtree = subtree


class SingularDerivative(RootFamilyError, ArithmeticError):
    pass


class ZeroResidual(RootFamilyError, ArithmeticError):
    pass


# solvers

class DegenerateStep(RootFamilyError, ArithmeticError):
    pass


class UndefinedParameter(RootFamilyError, ArithmeticError):
    pass


# analysis

class UndefinedCOC(RootFamilyError, ValueError):
    pass


class NotASimpleZero(RootFamilyError, ValueError):
    pass


class MultiplicityMismatch(RootFamilyError, ValueError):
    pass


class InsufficientData(RootFamilyError, ValueError):
    pass


# cli / benchmark

class ValidationError(RootFamilyError, ValueError):
    pass
