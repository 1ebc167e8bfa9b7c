"""
Exception hierarchy for qcong.
Arithmetic failures are ArithmeticError subclasses, bad inputs are ValueError
subclasses, so callers can catch either family without importing this module.
"""


class QcongError(Exception):
    """Base class for every error raised by qcong."""


class QcongArithmeticError(QcongError, ArithmeticError):
    """Exact arithmetic could not be carried out."""


class DivisionByZero(QcongArithmeticError):
    """Division by the zero polynomial or zero rational function."""


class NotDivisible(QcongArithmeticError):
    """An exact division left a remainder or a non-integral quotient."""


class BothZero(QcongArithmeticError):
    """gcd(0, 0) is undefined."""


class PoleAtPoint(QcongArithmeticError):
    """A rational function was evaluated at a root of its denominator."""


class NotInvertible(QcongArithmeticError):
    """A residue class shares a factor with the modulus."""


class InternalNonIntegral(QcongArithmeticError):
    """A quotient that must be an integer polynomial was not."""


class DomainError(QcongError, ValueError):
    """Arguments outside the range where a check is stated."""


class NotPrime(DomainError):
    """A classical check was given a composite modulus base."""


class EvenPrimeRejected(DomainError):
    """The classical congruences are stated for odd primes only."""


class ParseError(QcongError, ValueError):
    """Text could not be parsed as a polynomial or monomial parameter."""


class ConfigError(QcongError, ValueError):
    """An environment override has an invalid value."""


class UsageError(QcongError):
    """Command-line input that cannot be turned into work."""
