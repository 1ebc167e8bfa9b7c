"""
q-analogue primitives.
q-integers, q-shifted factorials with monomial arguments, q-binomial
coefficients, and the Factor/TermRatio vocabulary that the exact and residue
paths use to build q-series one term ratio at a time.
"""

import logging
import re
from fractions import Fraction
from typing import Iterable, List, NamedTuple, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from qcong.errors import (
    DivisionByZero,
    InternalNonIntegral,
    NotDivisible,
    ParseError,
    PoleAtPoint,
)
from qcong.services.polyring import IntPoly, PolyFraction

logger = logging.getLogger(__name__)


# ============================================================================
# Monomial parameters
# ============================================================================

_MONOMIAL_RE = re.compile(r"^([+-]?)(?:(1)|q(?:\^(\d+))?)$")


class MonomialParam(BaseModel):
    """A value sign·q^exponent used for Carlitz's a, b and Pochhammer arguments."""

    model_config = ConfigDict(frozen=True)

    sign: int = Field(default=1, description="+1 or -1")
    exponent: int = Field(default=0, ge=0, description="Power of q")

    @field_validator("sign")
    @classmethod
    def validate_sign(cls, v):
        if v not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {v}")
        return v

    @classmethod
    def parse(cls, text: str) -> "MonomialParam":
        """
        Parse `q`, `-1`, `-q^2`, `q^3` and the like.

        Raises:
            ParseError: If the text is not ±1 or ±q^j
        """
        match = _MONOMIAL_RE.match(text.replace(" ", ""))
        if match is None:
            raise ParseError(f"expected a monomial like q, -1 or -q^2, got {text!r}")
        sign_text, one, exponent = match.groups()
        sign = -1 if sign_text == "-" else 1
        if one:
            return cls(sign=sign, exponent=0)
        return cls(sign=sign, exponent=int(exponent) if exponent else 1)

    @property
    def is_one(self) -> bool:
        return self.sign == 1 and self.exponent == 0

    def to_poly(self) -> IntPoly:
        return IntPoly.monomial(self.sign, self.exponent)

    def __str__(self) -> str:
        sign = "-" if self.sign < 0 else ""
        if self.exponent == 0:
            return f"{sign}1"
        if self.exponent == 1:
            return f"{sign}q"
        return f"{sign}q^{self.exponent}"


# ============================================================================
# Basic q-analogues
# ============================================================================


def q_int(n: int) -> IntPoly:
    """[n] = 1 + q + ... + q^(n-1)."""
    if n < 1:
        raise ValueError(f"q_int expects n >= 1, got {n}")
    return IntPoly._trusted([1] * n)


def pochhammer(a: MonomialParam, s: int, k: int) -> IntPoly:
    """
    (a; q^s)_k = ∏_{i<k} (1 - a·q^(s·i)) for a monomial a.

    Args:
        a: Monomial argument
        s: Base exponent, the product runs in q^s
        k: Number of factors

    Returns:
        The expanded product
    """
    if k < 0:
        raise ValueError(f"pochhammer expects k >= 0, got {k}")
    result = IntPoly.one()
    for i in range(k):
        result = result.mul_binomial(-a.sign, a.exponent + s * i)
    return result


def q_binomial(n: int, k: int, s: int = 1) -> IntPoly:
    """
    Gaussian binomial [n k] in base q^s; zero when k < 0 or k > n.

    Raises:
        InternalNonIntegral: If an intermediate exact division fails
    """
    if k < 0 or k > n:
        return IntPoly()
    k = min(k, n - k)
    result = IntPoly.one()
    # After step i the value is [n-k+i choose i], always a polynomial
    for i in range(1, k + 1):
        result = result.mul_binomial(-1, s * (n - k + i))
        try:
            result = result.exact_div_binomial(-1, s * i)
        except NotDivisible as e:
            logger.error(f"q-binomial [{n} {k}] base q^{s} is not integral at step {i}")
            raise InternalNonIntegral(str(e)) from e
    return result


# ============================================================================
# Factor vocabulary
# ============================================================================


class Factor(NamedTuple):
    """
    Either the monomial c·q^e (any integer e) or the binomial 1 + c·q^e
    (e >= 0), with c = ±1.
    """

    coeff: int
    exponent: int
    binomial: bool

    @classmethod
    def mono(cls, c: int, e: int) -> "Factor":
        return cls(c, e, False)

    @classmethod
    def bin(cls, c: int, e: int) -> "Factor":
        if e < 0:
            raise ValueError(f"binomial factor needs a non-negative exponent, got {e}")
        return cls(c, e, True)

    def to_fraction(self) -> PolyFraction:
        if self.binomial:
            return PolyFraction(IntPoly.binomial(self.coeff, self.exponent))
        return PolyFraction.q_power(self.exponent, self.coeff)

    def __str__(self) -> str:
        sign = "-" if self.coeff < 0 else "+"
        if self.binomial:
            return f"(1 {sign} q^{self.exponent})"
        return f"{'-' if self.coeff < 0 else ''}q^{self.exponent}"


class TermRatio(NamedTuple):
    """t_{k+1} / t_k as numerator and denominator factor lists."""

    num: Tuple[Factor, ...]
    den: Tuple[Factor, ...]


def laurent_binomial(c: int, e: int) -> List[Factor]:
    """1 + c·q^e for any integer e; negative e becomes c·q^e · (1 + c·q^(-e))."""
    if e >= 0:
        return [Factor.bin(c, e)]
    return [Factor.mono(c, e), Factor.bin(c, -e)]


def pochhammer_factors(a: MonomialParam, s: int, k: int) -> List[Factor]:
    """Factor list of (a; q^s)_k."""
    return [Factor.bin(-a.sign, a.exponent + s * i) for i in range(k)]


class _Part(NamedTuple):
    """scalar · q^shift · ∏ binomials, all with non-negative exponents."""

    scalar: int
    shift: int
    binomials: Tuple[Tuple[int, int], ...]


def split_factors(
    num: Iterable[Factor], den: Iterable[Factor]
) -> Tuple[_Part, _Part]:
    """
    Collect monomials and constant binomials so that both sides only carry
    non-negative powers of q.

    Raises:
        DivisionByZero: If a denominator factor is identically zero
    """
    exponent = 0
    num_scalar, den_scalar = 1, 1
    num_bins: List[Tuple[int, int]] = []
    den_bins: List[Tuple[int, int]] = []
    for f in num:
        if not f.binomial:
            exponent += f.exponent
            num_scalar *= f.coeff
        elif f.exponent == 0:
            num_scalar *= 1 + f.coeff
        else:
            num_bins.append((f.coeff, f.exponent))
    for f in den:
        if not f.binomial:
            exponent -= f.exponent
            num_scalar *= f.coeff  # 1/c == c for c = ±1
        elif f.exponent == 0:
            if f.coeff == -1:
                raise DivisionByZero("denominator factor 1 - q^0 is zero")
            den_scalar *= 1 + f.coeff
        else:
            den_bins.append((f.coeff, f.exponent))
    return (
        _Part(num_scalar, max(exponent, 0), tuple(num_bins)),
        _Part(den_scalar, max(-exponent, 0), tuple(den_bins)),
    )


def apply_part(poly: IntPoly, part: _Part) -> IntPoly:
    """Multiply by the product a _Part describes."""
    for c, e in part.binomials:
        poly = poly.mul_binomial(c, e)
    if part.shift:
        poly = poly.shift(part.shift)
    return poly.scale(part.scalar)


def divide_part(poly: IntPoly, part: _Part) -> IntPoly:
    """
    Exactly divide by the product a _Part describes.

    Raises:
        NotDivisible: If the quotient is not an integer polynomial
    """
    for c, e in part.binomials:
        poly = poly.exact_div_binomial(c, e)
    if part.shift:
        poly = poly.shift(-part.shift)
    if part.scalar != 1:
        poly = poly.exact_div(IntPoly.constant(part.scalar))
    return poly


def factors_to_fraction(num: Iterable[Factor], den: Iterable[Factor] = ()) -> PolyFraction:
    """The unreduced fraction ∏ num / ∏ den."""
    num_part, den_part = split_factors(num, den)
    return PolyFraction(
        apply_part(IntPoly.one(), num_part), apply_part(IntPoly.one(), den_part)
    )


# ============================================================================
# Sums built from term ratios
# ============================================================================


def ratio_sum(
    first: Tuple[Sequence[Factor], Sequence[Factor]], ratios: Sequence[TermRatio]
) -> PolyFraction:
    """
    Σ_k t_k where t_0 = first and t_{k+1} = t_k · ratios[k].

    Evaluated by backward Horner, H = 1 + r_0(1 + r_1(1 + ...)), keeping
    numerator and denominator apart so no gcd is ever taken.

    Args:
        first: (numerator factors, denominator factors) of t_0
        ratios: Term ratios r_0 .. r_{K-2} for a sum of K terms

    Returns:
        The sum as an unreduced PolyFraction
    """
    x, y = IntPoly.one(), IntPoly.one()
    for ratio in reversed(ratios):
        rn, rd = split_factors(ratio.num, ratio.den)
        y = apply_part(y, rd)
        x = y + apply_part(x, rn)
    fn, fd = split_factors(*first)
    return PolyFraction(apply_part(x, fn), apply_part(y, fd))


def scaled_terms(first: IntPoly, ratios: Sequence[TermRatio]) -> List[IntPoly]:
    """
    Summands T_0 .. T_K over a common denominator chosen by the caller.

    T_{k+1} = T_k · num(r_k) / den(r_k), each division exact. The caller picks
    T_0 = t_0 · D for a denominator D that makes every division integral.

    Raises:
        NotDivisible: If a step does not divide exactly (D was too small)
    """
    terms = [first]
    current = first
    for ratio in ratios:
        rn, rd = split_factors(ratio.num, ratio.den)
        current = divide_part(apply_part(current, rn), rd)
        terms.append(current)
    return terms


# ============================================================================
# q -> 1 limits
# ============================================================================


def factor_limits(num: Iterable[Factor], den: Iterable[Factor] = ()) -> Tuple[int, Fraction]:
    """
    Write ∏ num / ∏ den as (1 - q)^mult · g(q) and return (mult, g(1)).

    Each 1 - q^e with e > 0 contributes (1 - q)·[e]. A literal zero factor
    1 - q^0 in the numerator makes the value zero.

    Raises:
        DivisionByZero: If a denominator factor is identically zero
    """
    mult = 0
    value = Fraction(1)
    for f in num:
        if not f.binomial:
            value *= f.coeff
        elif f.coeff == -1 and f.exponent == 0:
            return 0, Fraction(0)
        elif f.coeff == -1:
            mult += 1
            value *= f.exponent
        else:
            value *= 2
    for f in den:
        if not f.binomial:
            value *= f.coeff
        elif f.coeff == -1 and f.exponent == 0:
            raise DivisionByZero("denominator factor 1 - q^0 is zero")
        elif f.coeff == -1:
            mult -= 1
            value /= f.exponent
        else:
            value /= 2
    return mult, value


def value_at_one(num: Iterable[Factor], den: Iterable[Factor] = ()) -> Fraction:
    """
    lim_{q→1} ∏ num / ∏ den.

    Raises:
        PoleAtPoint: If more (1 - q) factors sit in the denominator
    """
    mult, value = factor_limits(num, den)
    if value == 0:
        return Fraction(0)
    if mult < 0:
        raise PoleAtPoint(f"factor product has a pole of order {-mult} at q = 1")
    return Fraction(0) if mult > 0 else value
