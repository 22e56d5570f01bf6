"""Exception hierarchy shared by all modules."""

import warnings


class FuchsError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class DivisionByZero(FuchsError, ZeroDivisionError):
    pass


class NotDivisible(FuchsError):
    pass


class TruncationTooShort(FuchsError):
    pass


class IrregularSingularity(FuchsError):
    pass


class ResonanceObstruction(FuchsError):
    pass


class RecognitionFailure(FuchsError):
    pass


class NoSolution(FuchsError):
    pass


class NonUnique(FuchsError):
    pass


class NotConstant(FuchsError):
    pass


class ObstructionAtPole(FuchsError):
    pass


class SymmetryUnavailable(FuchsError):
    pass


class ConditionNotMet(FuchsError):
    pass


class NotReducible(FuchsError):
    pass


class PoleAtSpecialS(FuchsError):
    pass


class IntegerExponent(FuchsError):
    pass


class RationalKernelNotFound(FuchsError):
    pass


class CaseUndetermined(FuchsError):
    pass


class ParseError(FuchsError, ValueError):
    pass


class GenericityViolation(UserWarning):
    """Warning only: construction proceeds on non-generic exponents."""


def warn_nongeneric(msg):
    warnings.warn(msg, GenericityViolation, stacklevel=3)
