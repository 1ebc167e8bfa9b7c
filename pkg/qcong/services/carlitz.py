"""
Carlitz's identity

    Σ_{k=0}^{N} (a;Q)_k (b;Q)_k / (Q;Q)_k · (-ab)^(N-k) Q^((N-k)(N+k-1)/2)
      = Σ_{k=0}^{N} (a;Q)_(N+1) (-b)^k Q^(k(k-1)/2)
                    / ((Q;Q)_k (Q;Q)_(N-k) (1 - a Q^(N-k)))

verified exactly with Q = q^s and monomial a, b, and at random rational
points (a, b, q).
"""

import logging
import time
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from qcong.config import settings
from qcong.errors import DomainError, PoleAtPoint
from qcong.models.schemas import CheckId, CheckResult
from qcong.services.polyring import IntPoly
from qcong.services.qseries import (
    Factor,
    MonomialParam,
    TermRatio,
    pochhammer,
    scaled_terms,
)

logger = logging.getLogger(__name__)


def _validate(n: int, a: MonomialParam, base_power: int) -> None:
    if n < 0:
        raise DomainError(f"carlitz needs n >= 0, got {n}")
    if base_power < 1:
        raise DomainError(f"carlitz needs base_power >= 1, got {base_power}")
    if a.is_one:
        raise DomainError("carlitz is not defined for a = 1 (the factor 1 - a vanishes)")


def carlitz_sides(
    n: int, a: MonomialParam, b: MonomialParam, base_power: int = 1
) -> Tuple[IntPoly, IntPoly]:
    """
    Both sides of the identity multiplied by (Q;Q)_n, Q = q^base_power.

    The summands on each side follow from the previous one by a sparse factor
    ratio and an exact division.

    Returns:
        (left side, right side) as integer polynomials
    """
    _validate(n, a, base_power)
    s = base_power
    ab_sign = a.sign * b.sign
    ab_exp = a.exponent + b.exponent
    q_fact = pochhammer(MonomialParam(sign=1, exponent=s), s, n)

    # T_0 = (Q;Q)_n · (-ab)^n · Q^(n(n-1)/2)
    lhs_first = q_fact.shift(n * ab_exp + s * n * (n - 1) // 2).scale((-ab_sign) ** n)
    lhs_ratios = [
        TermRatio(
            (Factor.bin(-a.sign, a.exponent + s * k), Factor.bin(-b.sign, b.exponent + s * k)),
            (Factor.bin(-1, s * (k + 1)), Factor.mono(-ab_sign, ab_exp + s * k)),
        )
        for k in range(n)
    ]

    # R_0 = (a;Q)_n
    rhs_first = pochhammer(a, s, n)
    rhs_ratios = [
        TermRatio(
            (
                Factor.bin(-a.sign, a.exponent + s * (n - k)),
                Factor.bin(-1, s * (n - k)),
                Factor.mono(-b.sign, b.exponent + s * k),
            ),
            (Factor.bin(-a.sign, a.exponent + s * (n - k - 1)), Factor.bin(-1, s * (k + 1))),
        )
        for k in range(n)
    ]

    lhs = sum(scaled_terms(lhs_first, lhs_ratios), IntPoly())
    rhs = sum(scaled_terms(rhs_first, rhs_ratios), IntPoly())
    return lhs, rhs


def carlitz_check(
    n: int,
    a: MonomialParam,
    b: MonomialParam,
    base_power: int = 1,
) -> CheckResult:
    """
    Verify Carlitz's identity exactly in ℚ(q).

    Raises:
        DomainError: For a = 1, negative n or base_power < 1
    """
    started = time.perf_counter()
    lhs, rhs = carlitz_sides(n, a, b, base_power)
    holds = lhs == rhs
    if not holds:
        logger.warning(f"Carlitz identity fails at n={n}, a={a}, b={b}, s={base_power}")
    return CheckResult.timed(
        check=CheckId.CARLITZ.value,
        n=n,
        power=0,
        started=started,
        holds=holds,
        valuation=None if holds else 0,
        params={"a": str(a), "b": str(b), "base_power": base_power},
        detail="exact identity" if holds else "LHS - RHS is nonzero",
    )


def carlitz_grid(n: int) -> List[CheckResult]:
    """carlitz_check over the configured a/b grid and base powers."""
    results = []
    for s in settings.CARLITZ_BASE_POWERS:
        for a_text in settings.CARLITZ_A_GRID:
            for b_text in settings.CARLITZ_B_GRID:
                a, b = MonomialParam.parse(a_text), MonomialParam.parse(b_text)
                results.append(carlitz_check(n, a, b, s))
    return results


# ============================================================================
# Rational specialisations
# ============================================================================


def _poch(x: Fraction, q: Fraction, k: int) -> Fraction:
    value = Fraction(1)
    for i in range(k):
        value *= 1 - x * q**i
    return value


def carlitz_specialization(n: int, a: Fraction, b: Fraction, q: Fraction) -> Tuple[Fraction, Fraction]:
    """
    Evaluate both sides of the identity at rational a, b, q.

    Raises:
        PoleAtPoint: If a denominator vanishes at the point
    """
    a, b, q = Fraction(a), Fraction(b), Fraction(q)
    lhs = Fraction(0)
    rhs = Fraction(0)
    try:
        for k in range(n + 1):
            lhs += (
                _poch(a, q, k) * _poch(b, q, k) / _poch(q, q, k)
                * (-a * b) ** (n - k) * q ** ((n - k) * (n + k - 1) // 2)
            )
            rhs += (
                _poch(a, q, n + 1) * (-b) ** k * q ** (k * (k - 1) // 2)
                / (_poch(q, q, k) * _poch(q, q, n - k) * (1 - a * q ** (n - k)))
            )
    except ZeroDivisionError as e:
        raise PoleAtPoint(f"carlitz identity has a pole at a={a}, b={b}, q={q}") from e
    return lhs, rhs


def _draw_rational(rng: np.random.Generator, height: int) -> Fraction:
    numerator = int(rng.integers(-height, height + 1))
    denominator = int(rng.integers(1, height + 1))
    return Fraction(numerator, denominator)


def carlitz_random_specializations(
    count: Optional[int] = None,
    max_n: Optional[int] = None,
    seed: Optional[int] = None,
) -> CheckResult:
    """
    Check the identity at random exact rational points (a, b, q).

    Points that hit a pole are skipped and redrawn. Each side is a polynomial
    of degree at most n + 1 in a and in b once cleared, so agreement at many
    random points is a strong test of the implementation.

    Args:
        count: Number of evaluated points
        max_n: Largest n drawn
        seed: Seed for numpy's default_rng
    """
    started = time.perf_counter()
    count = count or settings.CARLITZ_RANDOM_COUNT
    max_n = settings.CARLITZ_RANDOM_MAX_N if max_n is None else max_n
    seed = settings.CARLITZ_RANDOM_SEED if seed is None else seed
    height = settings.CARLITZ_RANDOM_HEIGHT

    rng = np.random.default_rng(seed)
    evaluated, skipped, failures = 0, 0, []
    while evaluated < count:
        n = int(rng.integers(0, max_n + 1))
        a, b, q = (_draw_rational(rng, height) for _ in range(3))
        try:
            lhs, rhs = carlitz_specialization(n, a, b, q)
        except PoleAtPoint:
            skipped += 1
            continue
        evaluated += 1
        if lhs != rhs:
            failures.append((n, a, b, q))
            logger.warning(f"Carlitz specialisation fails at n={n}, a={a}, b={b}, q={q}")

    holds = not failures
    detail = f"{evaluated} points, {skipped} poles redrawn, degree bound n + 1 in a and b"
    if failures:
        n, a, b, q = failures[0]
        detail += f"; first failure n={n} a={a} b={b} q={q}"
    return CheckResult.timed(
        check=CheckId.CARLITZ_SPECIALIZATION.value,
        n=max_n,
        power=0,
        started=started,
        holds=holds,
        valuation=None if holds else 0,
        params={"count": count, "seed": seed},
        detail=detail,
    )
