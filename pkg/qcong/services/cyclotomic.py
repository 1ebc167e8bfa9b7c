"""
Cyclotomic polynomials over the integers.
Memoized recursive-quotient construction plus an independent Moebius-product
oracle, and the small number-theoretic helpers they rely on.
"""

import logging
from typing import Dict, Iterable, List, Optional, Tuple

from qcong.services.polyring import IntPoly, poly_exact_div

logger = logging.getLogger(__name__)


# ============================================================================
# Number theory helpers
# ============================================================================


def factorize(n: int) -> Dict[int, int]:
    """Prime factorization by trial division."""
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    factors: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def divisors(n: int) -> List[int]:
    """Sorted list of the positive divisors of n."""
    result = [1]
    for p, k in factorize(n).items():
        result = [d * p**i for d in result for i in range(k + 1)]
    return sorted(result)


def moebius(n: int) -> int:
    factors = factorize(n)
    if any(k > 1 for k in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def totient(n: int) -> int:
    result = n
    for p in factorize(n):
        result -= result // p
    return result


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factorize(n) == {n: 1}


def _q_power_minus_one(e: int) -> IntPoly:
    """q^e - 1."""
    return IntPoly.binomial(-1, e).__neg__()


# ============================================================================
# Cache
# ============================================================================


class CyclotomicCache:
    """
    Memo table n -> Φₙ(q).

    The cache has a warm-up phase with a single writer, after which freeze()
    makes it read-only so one snapshot can be shared by parallel workers.
    A frozen cache still answers misses by computing without storing.
    """

    def __init__(self, table: Optional[Dict[int, IntPoly]] = None):
        self._table: Dict[int, IntPoly] = dict(table or {})
        self._frozen = False

    @property
    def frozen(self) -> bool:
        return self._frozen

    def __contains__(self, n: int) -> bool:
        return n in self._table

    def __len__(self) -> int:
        return len(self._table)

    def entries(self) -> Iterable[Tuple[int, IntPoly]]:
        return sorted(self._table.items())

    def get(self, n: int) -> IntPoly:
        """
        Get Φₙ(q), computing and memoizing it on a miss.

        Args:
            n: Positive index

        Returns:
            Monic Φₙ(q) of degree φ(n)
        """
        if n < 1:
            raise ValueError(f"cyclotomic index must be >= 1, got {n}")
        cached = self._table.get(n)
        if cached is not None:
            return cached

        # (q^n - 1) divided by every Φ_d with d a proper divisor
        poly = _q_power_minus_one(n)
        for d in divisors(n)[:-1]:
            poly = poly_exact_div(poly, self.get(d))

        if not self._frozen:
            self._table[n] = poly
        else:
            logger.debug(f"Frozen cyclotomic cache miss for n={n}")
        return poly

    def put(self, n: int, poly: IntPoly) -> None:
        """Insert a precomputed entry (used when loading a persisted cache)."""
        if self._frozen:
            raise RuntimeError("cannot insert into a frozen cyclotomic cache")
        self._table[n] = poly

    def warm_up(self, up_to: int) -> "CyclotomicCache":
        """Compute every Φ_d with d <= up_to."""
        if self._frozen:
            raise RuntimeError("cannot warm up a frozen cyclotomic cache")
        for n in range(1, up_to + 1):
            self.get(n)
        logger.info(f"Cyclotomic cache warmed up to n={up_to} ({len(self)} entries)")
        return self

    def freeze(self) -> "CyclotomicCache":
        self._frozen = True
        return self

    def snapshot(self) -> Dict[int, Tuple[int, ...]]:
        """Plain picklable copy of the table."""
        return {n: poly.coeffs for n, poly in self._table.items()}

    @classmethod
    def from_snapshot(cls, snapshot: Dict[int, Tuple[int, ...]]) -> "CyclotomicCache":
        cache = cls({n: IntPoly(coeffs) for n, coeffs in snapshot.items()})
        return cache.freeze()

    def verify_product_identity(self, n: int) -> bool:
        """Check ∏_{d|n} Φ_d(q) = qⁿ - 1 against the cached entries."""
        product = IntPoly.one()
        for d in divisors(n):
            product = product * self.get(d)
        return product == _q_power_minus_one(n)


def cyclotomic(n: int, cache: Optional[CyclotomicCache] = None) -> IntPoly:
    """
    Φₙ(q) by memoized recursive quotient.

    Args:
        n: Positive index
        cache: Cache to read and fill; a private one is used when omitted

    Returns:
        Monic integer polynomial of degree totient(n)
    """
    return (cache if cache is not None else CyclotomicCache()).get(n)


def cyclotomic_oracle(n: int) -> IntPoly:
    """Φₙ(q) from the Moebius product, independent of the cache."""
    if n < 1:
        raise ValueError(f"cyclotomic index must be >= 1, got {n}")
    numerator = IntPoly.one()
    denominator = IntPoly.one()
    for d in divisors(n):
        mu = moebius(d)
        if mu == 1:
            numerator = numerator * _q_power_minus_one(n // d)
        elif mu == -1:
            denominator = denominator * _q_power_minus_one(n // d)
    return poly_exact_div(numerator, denominator)
