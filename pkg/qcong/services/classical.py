"""
Classical integer congruences and their q → 1 link to the q-analogues.

    Σ_{k=0}^{p^r - 1} C(2k, k) / 2^k ≡ (-1)^((p^r - 1)/2)   (mod p),   Sun-Tauraso
                                                            (mod p^2), Sun
"""

import logging
import math
import time
from fractions import Fraction
from typing import Optional, Tuple

from qcong.config import settings
from qcong.errors import DomainError, EvenPrimeRejected, NotInvertible, NotPrime, PoleAtPoint
from qcong.models.schemas import CheckId, CheckResult, ClassicalParams
from qcong.services.cyclotomic import is_prime
from qcong.services.qseries import factor_limits
from qcong.services.series_checks import SERIES, series_terms

logger = logging.getLogger(__name__)


def extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with a·x + b·y = g = gcd(a, b)."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        quotient, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - quotient * x1
        y0, y1 = y1, y0 - quotient * y1
    return a, x0, y0


def mod_inverse(a: int, modulus: int) -> int:
    """
    Inverse of a modulo modulus.

    Raises:
        NotInvertible: If gcd(a, modulus) != 1
    """
    g, x, _ = extended_gcd(a % modulus, modulus)
    if g != 1:
        raise NotInvertible(f"{a} has no inverse modulo {modulus}")
    return x % modulus


def _validate_prime(p: int) -> None:
    if p == 2:
        raise EvenPrimeRejected("the classical congruences are stated for odd primes")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")


def _p_valuation(value: int, p: int, cap: int) -> int:
    v = 0
    while v < cap and value % p == 0:
        value //= p
        v += 1
    return v


def central_binomial_sum(count: int, modulus: int) -> int:
    """Σ_{k<count} C(2k, k) · 2^(-k) modulo an odd modulus."""
    half = mod_inverse(2, modulus)
    total, weight = 0, 1
    for k in range(count):
        total = (total + math.comb(2 * k, k) * weight) % modulus
        weight = weight * half % modulus
    return total


def classical_check(params: ClassicalParams) -> CheckResult:
    """
    Verify the classical congruence for p^r modulo p^power.

    Power 1 is the Sun-Tauraso congruence, power 2 Sun's strengthening.

    Raises:
        NotPrime: If p is composite
        EvenPrimeRejected: If p = 2
    """
    started = time.perf_counter()
    _validate_prime(params.p)
    check = CheckId.SUN_TAURASO if params.power == 1 else CheckId.SUN
    n = params.p**params.r
    modulus = params.p**params.power

    total = central_binomial_sum(n, modulus)
    expected = (-1) ** ((n - 1) // 2) % modulus
    difference = (total - expected) % modulus
    holds = difference == 0
    valuation = _p_valuation(difference, params.p, params.power) if difference else params.power

    logger.debug(f"{check.value} p={params.p} r={params.r}: sum ≡ {total}, expected {expected} mod {modulus}")
    return CheckResult.timed(
        check=check.value,
        n=n,
        power=params.power,
        started=started,
        holds=holds,
        valuation=valuation,
        params={"p": params.p, "r": params.r},
        detail=f"sum ≡ {total} (mod {modulus}), expected {expected}"
        + (", valuation capped at the power" if holds else ""),
    )


def series_value_at_one(check: CheckId, n: int) -> Fraction:
    """
    lim_{q→1} of Σ_{k<n} t_k, built term by term from the factor ratios.

    Raises:
        PoleAtPoint: If a term has a pole at q = 1
    """
    first, ratios = series_terms(check, n)
    mult, value = factor_limits(*first)
    total = Fraction(0)
    for k in range(n):
        if mult < 0:
            raise PoleAtPoint(f"{check.value} term {k} has a pole at q = 1")
        if mult == 0:
            total += value
        if k < len(ratios):
            step_mult, step_value = factor_limits(*ratios[k])
            mult += step_mult
            value *= step_value
    return total


def q_to_1_consistency(check: CheckId, p: int, r: int = 1, power: Optional[int] = None) -> CheckResult:
    """
    Let q → 1 in a q-congruence at n = p^r and compare with the classical sum.

    Holds when the left side at q = 1 equals Σ C(2k,k)/2^k exactly and the
    difference to the right side at q = 1 vanishes modulo p^power.

    Raises:
        DomainError: If the check has no classical limit or p^r is too large
        NotPrime, EvenPrimeRejected: For a bad p
    """
    started = time.perf_counter()
    check = CheckId(check)
    if check.value not in settings.Q_TO_1_TARGETS:
        raise DomainError(f"{check.value} has no classical q → 1 counterpart")
    _validate_prime(p)
    n = p**r
    if n > settings.Q_TO_1_MAX_MODULUS:
        raise DomainError(f"q-to-1 supports p^r <= {settings.Q_TO_1_MAX_MODULUS}, got {n}")
    power = power or settings.native_power(check.value)

    lhs = series_value_at_one(check, n)
    classical = sum((Fraction(math.comb(2 * k, k), 2**k) for k in range(n)), Fraction(0))
    sign, _ = SERIES[check].rhs(n, 0)
    difference = lhs - sign
    modulus = p**power
    vanishes = difference.numerator % modulus == 0 and difference.denominator % p != 0
    holds = lhs == classical and vanishes
    valuation = (
        _p_valuation(difference.numerator, p, power) if difference.numerator else power
    )
    if lhs != classical:
        logger.warning(f"{check.value} at q = 1, n={n}: {lhs} differs from the classical sum {classical}")

    return CheckResult.timed(
        check=CheckId.Q_TO_1.value,
        n=n,
        power=power,
        started=started,
        holds=holds,
        valuation=valuation,
        params={"target": check.value, "p": p, "r": r},
        detail=f"LHS(1) = {lhs}, RHS(1) = {sign}",
    )
