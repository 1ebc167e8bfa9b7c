"""
Series congruence checks.
Each series is described by its first term and the ratio between
consecutive terms; the sum is evaluated exactly for small n and in the
cover ring ℤ[q]/(qⁿ - 1)^m beyond settings.EXACT_SERIES_MAX_N.
"""

import logging
import time
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

from qcong.config import settings
from qcong.errors import DomainError
from qcong.models.schemas import CheckId, CheckResult
from qcong.services.congruence import (
    CongruenceVerdict,
    CoverRing,
    ResidueElem,
    ResidueRing,
    congruent_mod,
    ring_inv,
)
from qcong.services.cyclotomic import CyclotomicCache
from qcong.services.polyring import PolyFraction, RatFunc
from qcong.services.qseries import Factor, TermRatio, laurent_binomial, ratio_sum

logger = logging.getLogger(__name__)

FirstTerm = Tuple[Tuple[Factor, ...], Tuple[Factor, ...]]


class SeriesDefinition(NamedTuple):
    """How to build one series and its right-hand side."""

    first: Callable[[int, int], FirstTerm]
    ratio: Callable[[int, int], TermRatio]
    rhs: Callable[[int, int], Tuple[int, int]]  # (sign, exponent)


# ============================================================================
# Term ratios
# ============================================================================


def _one(n: int, d: int) -> FirstTerm:
    return (), ()


def _q_to(e: int) -> FirstTerm:
    return (Factor.mono(1, e),), ()


def _ratio_guo_zeng(k: int, d: int) -> TermRatio:
    # (q^(2d+1); q^2)_k / (q; q)_k · q^k
    return TermRatio(
        tuple(laurent_binomial(-1, 2 * d + 1 + 2 * k)) + (Factor.mono(1, 1),),
        (Factor.bin(-1, k + 1),),
    )


def _ratio_minus_one(k: int, d: int) -> TermRatio:
    # (q; q^2)_k (-1; q^2)_k / (q^2; q^2)_k · q^(2k)
    return TermRatio(
        (Factor.bin(-1, 2 * k + 1), Factor.bin(1, 2 * k), Factor.mono(1, 2)),
        (Factor.bin(-1, 2 * k + 2),),
    )


def _ratio_minus_q2(k: int, d: int) -> TermRatio:
    # (q; q^2)_k (-q^2; q^2)_k / (q^2; q^2)_k · q^(2k+1)
    return TermRatio(
        (Factor.bin(-1, 2 * k + 1), Factor.bin(1, 2 * k + 2), Factor.mono(1, 2)),
        (Factor.bin(-1, 2 * k + 2),),
    )


def _ratio_b1(k: int, d: int) -> TermRatio:
    # ... · q^(-k^2)
    return TermRatio(
        (Factor.bin(-1, 2 * k + 1), Factor.bin(1, 2 * k), Factor.mono(1, -(2 * k + 1))),
        (Factor.bin(-1, 2 * k + 2),),
    )


def _ratio_c1(k: int, d: int) -> TermRatio:
    # ... · q^(-(k+1)^2)
    return TermRatio(
        (Factor.bin(-1, 2 * k + 1), Factor.bin(1, 2 * k + 2), Factor.mono(1, -(2 * k + 3))),
        (Factor.bin(-1, 2 * k + 2),),
    )


# ============================================================================
# Right-hand sides
# ============================================================================


def _half(n: int) -> int:
    return (n - 1) // 2


def _parity(e: int) -> int:
    return -1 if e % 2 else 1


def _rhs_guo_zeng(n: int, d: int) -> Tuple[int, int]:
    return _parity(_half(n) + d), (n * n - (2 * d + 1) ** 2) // 4


def _rhs_guo(n: int, d: int) -> Tuple[int, int]:
    return _parity(_half(n)), 0


def _case_rhs(n: int, one_mod_four: int, three_mod_four: int) -> Tuple[int, int]:
    return (1, one_mod_four) if n % 4 == 1 else (-1, three_mod_four)


SERIES: Dict[CheckId, SeriesDefinition] = {
    CheckId.ANEW3: SeriesDefinition(_one, lambda k, d: _ratio_guo_zeng(k, 0), lambda n, d: _rhs_guo_zeng(n, 0)),
    CheckId.ANEW4: SeriesDefinition(_one, lambda k, d: _ratio_guo_zeng(k, 0), lambda n, d: _rhs_guo_zeng(n, 0)),
    CheckId.WANG_YU: SeriesDefinition(_one, _ratio_guo_zeng, _rhs_guo_zeng),
    CheckId.ANEW5: SeriesDefinition(_one, _ratio_minus_one, _rhs_guo),
    CheckId.ANEW6: SeriesDefinition(lambda n, d: _q_to(1), _ratio_minus_q2, _rhs_guo),
    CheckId.A1: SeriesDefinition(
        _one,
        _ratio_minus_one,
        lambda n, d: _case_rhs(n, n * (n - 1) // 2, n * (n + 1) // 2),
    ),
    CheckId.A2: SeriesDefinition(
        lambda n, d: _q_to(1),
        _ratio_minus_q2,
        lambda n, d: _case_rhs(n, n * (n + 1) // 2, n * (n - 1) // 2),
    ),
    CheckId.B1: SeriesDefinition(
        _one,
        _ratio_b1,
        lambda n, d: _case_rhs(n, -n * (n - 1) // 2, -n * (n + 1) // 2),
    ),
    CheckId.C1: SeriesDefinition(
        lambda n, d: _q_to(-1),
        _ratio_c1,
        lambda n, d: _case_rhs(n, -n * (n + 1) // 2, -n * (n - 1) // 2),
    ),
}


# ============================================================================
# Validation
# ============================================================================


def validate_odd(n: int) -> None:
    """Reject n that is not a positive odd integer."""
    if n < 1 or n % 2 == 0:
        raise DomainError(f"congruences are stated for positive odd n, got n={n}")


def validate_series(check: CheckId, n: int, d: int = 0) -> None:
    if check not in SERIES:
        raise DomainError(f"{check.value} is not a series check")
    validate_odd(n)
    if check == CheckId.WANG_YU and not n > 2 * abs(d) - 1:
        raise DomainError(f"wang-yu needs n > 2|d| - 1, got n={n}, d={d}")


def wang_yu_parameters(n: int) -> List[int]:
    """Every d with |d| <= WANG_YU_MAX_ABS_D for which the congruence is stated."""
    bound = settings.WANG_YU_MAX_ABS_D
    return [d for d in range(-bound, bound + 1) if n > 2 * abs(d) - 1]


def series_terms(check: CheckId, n: int, d: int = 0) -> Tuple[FirstTerm, List[TermRatio]]:
    """First term and the n - 1 term ratios of a series."""
    validate_series(check, n, d)
    definition = SERIES[check]
    return definition.first(n, d), [definition.ratio(k, d) for k in range(n - 1)]


# ============================================================================
# Left and right sides
# ============================================================================


def series_lhs_fraction(check: CheckId, n: int, d: int = 0) -> PolyFraction:
    """Σ_{k<n} t_k as an unreduced fraction."""
    first, ratios = series_terms(check, n, d)
    return ratio_sum(first, ratios)


def series_lhs(check: CheckId, n: int, d: int = 0) -> RatFunc:
    """
    The finite sum Σ_{k=0}^{n-1} t_k in canonical form.

    Raises:
        DomainError: For even n or an out-of-range Wang-Yu parameter
    """
    return series_lhs_fraction(check, n, d).canonical()


def series_rhs(check: CheckId, n: int, d: int = 0) -> RatFunc:
    """The signed monomial on the right of the congruence."""
    validate_series(check, n, d)
    sign, exponent = SERIES[check].rhs(n, d)
    return RatFunc.q_power(exponent, sign)


def series_lhs_residue(
    check: CheckId,
    n: int,
    m: int,
    d: int = 0,
    cache: Optional[CyclotomicCache] = None,
) -> ResidueElem:
    """
    The sum as an element of ℚ[q]/Φₙ^m.

    The terms are accumulated over a common denominator in the cover ring;
    the denominator is inverted once at the end.
    """
    first, ratios = series_terms(check, n, d)
    cover = CoverRing(n, m, cache)
    x, y, _ = cover.horner(first, ratios)
    residue: ResidueRing = cover.residue
    return residue.from_cover(x) * ring_inv(residue.from_cover(y))


def _ring_verdict(
    check: CheckId, n: int, m: int, d: int, cache: Optional[CyclotomicCache]
) -> CongruenceVerdict:
    first, ratios = series_terms(check, n, d)
    sign, exponent = SERIES[check].rhs(n, d)
    cover = CoverRing(n, m, cache)
    x, y, den_factors = cover.horner(first, ratios)
    bad = [f for f in den_factors if not cover.is_coprime_factor(f)]
    if bad:
        logger.warning(f"{check.value} n={n}: denominator factors {bad} vanish modulo Φ_{n}")
        return CongruenceVerdict(holds=False, valuation=0, denominator_coprime=False, exact=False)
    diff = cover.sub(x, cover.mul_monomial(y, sign, exponent))
    v = cover.valuation(diff)
    return CongruenceVerdict(holds=v >= m, valuation=v, exact=False)


def check_series(
    check: CheckId,
    n: int,
    m: Optional[int] = None,
    d: int = 0,
    cache: Optional[CyclotomicCache] = None,
    exact: Optional[bool] = None,
) -> CheckResult:
    """
    Verify Σ t_k ≡ RHS (mod Φₙ(q)^m).

    Args:
        check: One of the series CheckIds
        n: Odd positive index
        m: Modulus power, the check's native power when omitted
        d: Wang-Yu parameter
        cache: Shared cyclotomic cache
        exact: Force the exact (True) or residue (False) path

    Returns:
        CheckResult; in the residue path a valuation equal to m is a lower bound

    Raises:
        DomainError: For even n or an out-of-range Wang-Yu parameter
    """
    started = time.perf_counter()
    validate_series(check, n, d)
    m = m or settings.native_power(check.value)
    if exact is None:
        exact = n <= settings.EXACT_SERIES_MAX_N
    if not exact and m > 2:
        raise DomainError(f"the residue path supports powers 1 and 2, got {m}")

    if exact:
        lhs = series_lhs_fraction(check, n, d)
        sign, exponent = SERIES[check].rhs(n, d)
        verdict = congruent_mod(lhs, PolyFraction.q_power(exponent, sign), n, m, cache)
        detail = "exact"
    else:
        verdict = _ring_verdict(check, n, m, d, cache)
        detail = "residue ring"
        if verdict.valuation >= m:
            detail += ", valuation is a lower bound"
    if not verdict.denominator_coprime:
        detail += ", ill posed: denominator divisible by Φn"

    logger.debug(f"{check.value} n={n} m={m} d={d}: {verdict.holds} ({detail})")
    params = {"d": d} if check == CheckId.WANG_YU else {}
    return CheckResult.timed(
        check=check.value,
        n=n,
        power=m,
        started=started,
        holds=verdict.holds,
        valuation=verdict.valuation,
        params=params,
        detail=detail,
    )
