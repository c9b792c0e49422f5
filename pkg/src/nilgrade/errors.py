"""Exception types shared across the package."""
from __future__ import annotations


class NilgradeError(Exception):
    """Base class for all domain errors raised by this package."""


class DivisionByZero(NilgradeError):
    pass


class FieldMismatch(NilgradeError):
    """Arithmetic attempted between scalars of different field descriptors."""


class SecondExtensionRequired(NilgradeError):
    """A computation would need two independent quadratic radicands at once."""


class NotNilpotent(NilgradeError):
    """The power filtration did not reach zero within the dimension bound."""


class NotNilpotentMatrix(NilgradeError):
    pass


class SingularMatrix(NilgradeError):
    pass


class Inconsistent(NilgradeError):
    """A linear system has no solution."""


class ElementInSquare(NilgradeError):
    """The probe vector lies in the span of all products."""


class DimensionTooSmall(NilgradeError):
    pass


class DegenerateParams(NilgradeError):
    """Parameter tuple violates the family's intrinsic constraint."""


class ParamSyntax(NilgradeError):
    """A parameter literal that does not parse; the message names the token."""


class ConstraintViolation(NilgradeError):
    """A representative's continuous parameter is outside its allowed set."""


class InadmissibleChange(NilgradeError):
    """A generator change whose denominators vanish for the given parameters."""


class UnclassifiedParameters(NilgradeError):
    """The derived decision predicates failed to place a parameter tuple."""


class BudgetExhausted(NilgradeError):
    """A bounded search ended without an answer; absence is not a proof."""


class BadPrime(NilgradeError):
    """Reduction mod p impossible: denominator divisible by p, or a needed
    square root does not exist in F_p."""
