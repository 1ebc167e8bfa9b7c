"""
Exact polynomial arithmetic over the integers and rationals.
Provides IntPoly (dense, integer coefficients), RatPoly (rational coefficients),
the canonical rational function field RatFunc and the unreduced PolyFraction
used for long sums.
"""

import logging
import re
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from qcong.config import settings
from qcong.errors import (
    BothZero,
    DivisionByZero,
    NotDivisible,
    ParseError,
    PoleAtPoint,
)

logger = logging.getLogger(__name__)

# Degree of the zero polynomial
NEG_INF = float("-inf")


def _strip(coeffs: List) -> List:
    """Drop trailing zero coefficients in place and return the list."""
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _add_lists(a: Sequence[int], b: Sequence[int]) -> List[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return out


def _schoolbook(a: Sequence[int], b: Sequence[int]) -> List[int]:
    """Schoolbook product; the operand with fewer nonzero terms drives the outer loop."""
    if not a or not b:
        return []
    if sum(1 for c in a if c) > sum(1 for c in b if c):
        a, b = b, a
    lb = len(b)
    out = [0] * (len(a) + lb - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        segment = out[i : i + lb]
        if ai == 1:
            out[i : i + lb] = [s + bj for s, bj in zip(segment, b)]
        elif ai == -1:
            out[i : i + lb] = [s - bj for s, bj in zip(segment, b)]
        else:
            out[i : i + lb] = [s + ai * bj for s, bj in zip(segment, b)]
    return out


# Operands with at most this many nonzero terms skip Karatsuba
SPARSE_TERMS = 8


def _is_sparse(coeffs: Sequence[int]) -> bool:
    count = 0
    for c in coeffs:
        if c:
            count += 1
            if count > SPARSE_TERMS:
                return False
    return True


def _karatsuba(a: Sequence[int], b: Sequence[int], threshold: int) -> List[int]:
    """Karatsuba product of coefficient lists, schoolbook below the threshold."""
    la, lb = len(a), len(b)
    if la < threshold or lb < threshold:
        return _schoolbook(a, b)

    if la < lb:
        a, b, la, lb = b, a, lb, la

    out = [0] * (la + lb - 1)

    # Unbalanced operands: multiply the long one chunk by chunk
    if la > 2 * lb:
        for start in range(0, la, lb):
            piece = _karatsuba(a[start : start + lb], b, threshold)
            for i, c in enumerate(piece):
                out[start + i] += c
        return out

    m = lb // 2
    a0, a1 = a[:m], a[m:]
    b0, b1 = b[:m], b[m:]
    z0 = _karatsuba(a0, b0, threshold)
    z2 = _karatsuba(a1, b1, threshold)
    z1 = _karatsuba(_add_lists(a0, a1), _add_lists(b0, b1), threshold)
    for i, c in enumerate(z0):
        z1[i] -= c
    for i, c in enumerate(z2):
        z1[i] -= c

    for i, c in enumerate(z0):
        out[i] += c
    for i, c in enumerate(z1):
        out[m + i] += c
    for i, c in enumerate(z2):
        out[2 * m + i] += c
    return out


class IntPoly:
    """
    Dense univariate polynomial in q with arbitrary-precision integer coefficients.

    Coefficients are stored in ascending degree order with no trailing zeros;
    the zero polynomial has no coefficients and degree NEG_INF. Values are
    immutable and hashable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        object.__setattr__(self, "coeffs", tuple(_strip([int(c) for c in coeffs])))

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def _trusted(cls, coeffs: List[int]) -> "IntPoly":
        """Wrap a list of ints without re-validating every coefficient."""
        poly = object.__new__(cls)
        object.__setattr__(poly, "coeffs", tuple(_strip(coeffs)))
        return poly

    @classmethod
    def zero(cls) -> "IntPoly":
        return cls()

    @classmethod
    def one(cls) -> "IntPoly":
        return cls((1,))

    @classmethod
    def constant(cls, c: int) -> "IntPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, c: int, e: int) -> "IntPoly":
        """c·q^e for e ≥ 0."""
        if e < 0:
            raise ValueError(f"IntPoly cannot hold q^{e}")
        return cls._trusted([0] * e + [c])

    @classmethod
    def binomial(cls, c: int, e: int) -> "IntPoly":
        """1 + c·q^e for e ≥ 0."""
        if e < 0:
            raise ValueError(f"IntPoly cannot hold q^{e}")
        if e == 0:
            return cls((1 + c,))
        return cls._trusted([1] + [0] * (e - 1) + [c])

    @classmethod
    def from_terms(cls, terms: Dict[int, int]) -> "IntPoly":
        """Build from a {degree: coefficient} mapping with non-negative degrees."""
        if not terms:
            return cls()
        out = [0] * (max(terms) + 1)
        for e, c in terms.items():
            if e < 0:
                raise ValueError(f"IntPoly cannot hold q^{e}")
            out[e] += c
        return cls._trusted(out)

    # ------------------------------------------------------------------
    # Basic properties
    # ------------------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        """Leading coefficient (0 for the zero polynomial)."""
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPoly.constant(other)
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("IntPoly", self.coeffs))

    def __repr__(self) -> str:
        return f"IntPoly({render(self)!r})"

    def __str__(self) -> str:
        return render(self)

    # ------------------------------------------------------------------
    # Ring arithmetic
    # ------------------------------------------------------------------

    def __add__(self, other) -> "IntPoly":
        other = _as_intpoly(other)
        if other is None:
            return NotImplemented
        return IntPoly._trusted(_add_lists(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self) -> "IntPoly":
        return IntPoly._trusted([-c for c in self.coeffs])

    def __sub__(self, other) -> "IntPoly":
        other = _as_intpoly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "IntPoly":
        other = _as_intpoly(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, IntPoly):
            return NotImplemented
        if _is_sparse(self.coeffs) or _is_sparse(other.coeffs):
            return IntPoly._trusted(_schoolbook(self.coeffs, other.coeffs))
        return IntPoly._trusted(
            _karatsuba(self.coeffs, other.coeffs, settings.KARATSUBA_THRESHOLD)
        )

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntPoly":
        if e < 0:
            raise ValueError("IntPoly powers must be non-negative")
        result = IntPoly.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c: int) -> "IntPoly":
        if c == 1:
            return self
        return IntPoly._trusted([c * x for x in self.coeffs])

    def shift(self, e: int) -> "IntPoly":
        """Multiply by q^e; negative e requires the low coefficients to vanish."""
        if e >= 0 or self.is_zero:
            return IntPoly._trusted([0] * e + list(self.coeffs)) if e else self
        if any(self.coeffs[:-e]):
            raise NotDivisible(f"{self} is not divisible by q^{-e}")
        return IntPoly._trusted(list(self.coeffs[-e:]))

    def mul_binomial(self, c: int, e: int) -> "IntPoly":
        """Multiply by 1 + c·q^e in linear time."""
        if e == 0:
            return self.scale(1 + c)
        if self.is_zero:
            return self
        out = list(self.coeffs) + [0] * e
        if c == 1:
            out[e:] = [x + y for x, y in zip(out[e:], self.coeffs)]
        elif c == -1:
            out[e:] = [x - y for x, y in zip(out[e:], self.coeffs)]
        else:
            out[e:] = [x + c * y for x, y in zip(out[e:], self.coeffs)]
        return IntPoly._trusted(out)

    def exact_div_binomial(self, c: int, e: int) -> "IntPoly":
        """
        Divide exactly by 1 + c·q^e with c = ±1 and e ≥ 1.

        Raises:
            NotDivisible: If the division leaves a remainder
        """
        if e == 0:
            if 1 + c == 0:
                raise DivisionByZero("division by the zero polynomial 1 - 1")
            return self.exact_div(IntPoly.constant(1 + c))
        if c not in (1, -1):
            return self.exact_div(IntPoly.binomial(c, e))
        p = self.coeffs
        d = len(p) - 1 - e
        if self.is_zero:
            return self
        if d < 0:
            raise NotDivisible(f"{self} is not divisible by 1 {'+' if c > 0 else '-'} q^{e}")
        quotient = [0] * (d + 1)
        for i in range(d + 1):
            quotient[i] = p[i] - c * quotient[i - e] if i >= e else p[i]
        # The top e coefficients must match c·q^e times the quotient's tail;
        # below q^e that tail is zero
        for i in range(d + 1, d + 1 + e):
            if p[i] != (c * quotient[i - e] if i >= e else 0):
                raise NotDivisible(
                    f"{self} is not divisible by 1 {'+' if c > 0 else '-'} q^{e}"
                )
        return IntPoly._trusted(quotient)

    # ------------------------------------------------------------------
    # Division
    # ------------------------------------------------------------------

    def divrem(self, d: "IntPoly") -> Tuple["RatPoly", "RatPoly"]:
        return poly_divrem(self, d)

    def try_exact_div(self, d: "IntPoly") -> Optional["IntPoly"]:
        """Exact quotient over the integers, or None when d does not divide self."""
        if d.is_zero:
            raise DivisionByZero("division by the zero polynomial")
        if self.is_zero:
            return self
        dd = d.degree
        if self.degree < dd:
            return None
        lc = d.lc
        terms = [(j, c) for j, c in enumerate(d.coeffs[:-1]) if c]
        r = list(self.coeffs)
        quotient = [0] * (len(r) - dd)
        for i in range(len(r) - dd - 1, -1, -1):
            c = r[i + dd]
            if not c:
                continue
            if lc == 1:
                t = c
            elif lc == -1:
                t = -c
            else:
                t, rem = divmod(c, lc)
                if rem:
                    return None
            quotient[i] = t
            for j, dj in terms:
                r[i + j] -= t * dj
        if any(r[:dd]):
            return None
        return IntPoly._trusted(quotient)

    def exact_div(self, d: "IntPoly") -> "IntPoly":
        return poly_exact_div(self, d)

    def rem_monic(self, d: "IntPoly") -> "IntPoly":
        """Remainder modulo a monic divisor; stays integral."""
        if d.lc != 1:
            raise ValueError(f"rem_monic needs a monic divisor, got {d}")
        dd = len(d.coeffs) - 1
        r = list(self.coeffs)
        if len(r) <= dd:
            return self
        terms = [(j, c) for j, c in enumerate(d.coeffs[:-1]) if c]
        for i in range(len(r) - 1, dd - 1, -1):
            t = r[i]
            if not t:
                continue
            base = i - dd
            for j, dj in terms:
                r[base + j] -= t * dj
        return IntPoly._trusted(r[:dd])

    # ------------------------------------------------------------------
    # Content, evaluation, reversal
    # ------------------------------------------------------------------

    def content(self) -> int:
        """Non-negative gcd of the coefficients (0 for the zero polynomial)."""
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
            if g == 1:
                break
        return g

    def primitive_part(self) -> "IntPoly":
        """self divided by its content, normalised to a positive leading coefficient."""
        if self.is_zero:
            return self
        g = self.content()
        if self.lc < 0:
            g = -g
        if g == 1:
            return self
        return IntPoly._trusted([c // g for c in self.coeffs])

    def eval(self, x) -> Union[int, Fraction]:
        """Horner evaluation at an integer or Fraction."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def reversed_to(self, width: int) -> "IntPoly":
        """q^width · self(1/q), for width ≥ degree."""
        padded = list(self.coeffs) + [0] * (width + 1 - len(self.coeffs))
        return IntPoly._trusted(padded[::-1])

    def to_ratpoly(self) -> "RatPoly":
        return RatPoly(Fraction(c) for c in self.coeffs)


def _as_intpoly(value) -> Optional[IntPoly]:
    if isinstance(value, IntPoly):
        return value
    if isinstance(value, int):
        return IntPoly.constant(value)
    return None


class RatPoly:
    """Dense polynomial with Fraction coefficients; same layout as IntPoly."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(
            self, "coeffs", tuple(_strip([Fraction(c) for c in coeffs]))
        )

    def __setattr__(self, name, value):
        raise AttributeError("RatPoly is immutable")

    @classmethod
    def _trusted(cls, coeffs: List[Fraction]) -> "RatPoly":
        poly = object.__new__(cls)
        object.__setattr__(poly, "coeffs", tuple(_strip(coeffs)))
        return poly

    @classmethod
    def from_intpoly(cls, p: IntPoly) -> "RatPoly":
        return cls._trusted([Fraction(c) for c in p.coeffs])

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, IntPoly):
            other = RatPoly.from_intpoly(other)
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("RatPoly", self.coeffs))

    def __repr__(self) -> str:
        return f"RatPoly({render(self)!r})"

    def __str__(self) -> str:
        return render(self)

    def __add__(self, other: "RatPoly") -> "RatPoly":
        return RatPoly._trusted(_add_lists(self.coeffs, other.coeffs))

    def __neg__(self) -> "RatPoly":
        return RatPoly._trusted([-c for c in self.coeffs])

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __mul__(self, other) -> "RatPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return RatPoly._trusted(_schoolbook(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def scale(self, c) -> "RatPoly":
        return RatPoly._trusted([c * x for x in self.coeffs])

    def monic(self) -> "RatPoly":
        if self.is_zero:
            return self
        return self.scale(1 / self.lc)

    def divrem(self, d) -> Tuple["RatPoly", "RatPoly"]:
        """Long division over the rationals."""
        if isinstance(d, IntPoly):
            d = RatPoly.from_intpoly(d)
        if d.is_zero:
            raise DivisionByZero("division by the zero polynomial")
        r = list(self.coeffs)
        dd = len(d.coeffs) - 1
        if len(r) - 1 < dd:
            return RatPoly(), self
        lc = d.lc
        terms = [(j, c) for j, c in enumerate(d.coeffs[:-1]) if c]
        quotient = [Fraction(0)] * (len(r) - dd)
        for i in range(len(r) - dd - 1, -1, -1):
            c = r[i + dd]
            if not c:
                continue
            t = c / lc
            quotient[i] = t
            for j, dj in terms:
                r[i + j] -= t * dj
        return RatPoly._trusted(quotient), RatPoly._trusted(r[:dd])

    def eval(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


# ============================================================================
# Division and gcd
# ============================================================================


def poly_divrem(p: IntPoly, d: IntPoly) -> Tuple[RatPoly, RatPoly]:
    """
    Divide p by d over the rationals.

    Args:
        p: Dividend
        d: Divisor

    Returns:
        (quotient, remainder) with p = quotient·d + remainder and
        degree(remainder) < degree(d)

    Raises:
        DivisionByZero: If d is the zero polynomial
    """
    return RatPoly.from_intpoly(p).divrem(RatPoly.from_intpoly(d))


def poly_exact_div(p: IntPoly, d: IntPoly) -> IntPoly:
    """
    Exact quotient p / d with integer coefficients.

    Raises:
        DivisionByZero: If d is zero
        NotDivisible: If d leaves a remainder or the quotient is not integral
    """
    quotient = p.try_exact_div(d)
    if quotient is None:
        raise NotDivisible(f"{d} does not divide {p} over the integers")
    return quotient


def _pseudo_remainder(a: IntPoly, b: IntPoly) -> IntPoly:
    """Remainder of a·c by b for a nonzero integer c, computed without fractions."""
    r = list(a.coeffs)
    db = b.degree
    lb = b.lc
    bc = b.coeffs
    while r and len(r) - 1 >= db:
        c = r[-1]
        shift = len(r) - 1 - db
        g = gcd(c, lb)
        mul_r, mul_b = lb // g, c // g
        if mul_r != 1:
            r = [x * mul_r for x in r]
        for j, bj in enumerate(bc):
            if bj:
                r[shift + j] -= mul_b * bj
        _strip(r)
    return IntPoly._trusted(r)


def poly_gcd(p: IntPoly, r: IntPoly) -> IntPoly:
    """
    Primitive gcd of two integer polynomials by a primitive remainder sequence.

    Returns:
        The gcd with content 1 and positive leading coefficient

    Raises:
        BothZero: If both inputs are zero
    """
    if p.is_zero and r.is_zero:
        raise BothZero("gcd(0, 0) is undefined")
    if r.is_zero:
        return p.primitive_part()
    if p.is_zero:
        return r.primitive_part()

    a, b = p.primitive_part(), r.primitive_part()
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero:
        if b.degree == 0:
            return IntPoly.one()
        rem = _pseudo_remainder(a, b)
        a, b = b, rem.primitive_part()
    return a.primitive_part()


# ============================================================================
# Rational functions
# ============================================================================


def _canonical_pair(num: IntPoly, den: IntPoly) -> Tuple[IntPoly, IntPoly]:
    """Reduce num/den to lowest terms in Z[q] with a positive leading denominator coefficient."""
    if den.is_zero:
        raise DivisionByZero("rational function with zero denominator")
    if num.is_zero:
        return IntPoly(), IntPoly.one()
    if den.degree > 0 and num.degree > 0:
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = poly_exact_div(num, g)
            den = poly_exact_div(den, g)
    c = gcd(num.content(), den.content())
    if den.lc < 0:
        c = -c
    if c != 1:
        num = IntPoly._trusted([x // c for x in num.coeffs])
        den = IntPoly._trusted([x // c for x in den.coeffs])
    return num, den


class RatFunc:
    """
    Canonical element of Q(q): num/den with gcd(num, den) = 1 in Z[q] and a
    positive leading coefficient on den. Structural equality is value equality.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        num_p, den_p = _as_intpoly(num), _as_intpoly(den)
        if num_p is None or den_p is None:
            raise TypeError("RatFunc takes IntPoly or int arguments")
        n, d = _canonical_pair(num_p, den_p)
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "den", d)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def _trusted(cls, num: IntPoly, den: IntPoly) -> "RatFunc":
        f = object.__new__(cls)
        object.__setattr__(f, "num", num)
        object.__setattr__(f, "den", den)
        return f

    @classmethod
    def q_power(cls, e: int, c: int = 1) -> "RatFunc":
        """The Laurent monomial c·q^e."""
        if c == 0:
            return cls()
        if e >= 0:
            return cls._trusted(IntPoly.monomial(c, e), IntPoly.one())
        return cls._trusted(IntPoly.constant(c), IntPoly.monomial(1, -e))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __eq__(self, other) -> bool:
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(("RatFunc", self.num.coeffs, self.den.coeffs))

    def __repr__(self) -> str:
        return f"RatFunc({str(self)!r})"

    def __str__(self) -> str:
        if self.den == IntPoly.one():
            return render(self.num)
        return f"({render(self.num)})/({render(self.den)})"

    def __add__(self, other) -> "RatFunc":
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc._trusted(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        return (-self) + other

    def __mul__(self, other) -> "RatFunc":
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise DivisionByZero("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFunc":
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, e: int) -> "RatFunc":
        if e < 0:
            if self.is_zero:
                raise DivisionByZero("negative power of zero")
            # Inverting a canonical pair only needs the sign moved to the numerator
            num, den = self.den, self.num
            if den.lc < 0:
                num, den = -num, -den
            return RatFunc._trusted(num ** (-e), den ** (-e))
        # Powers of coprime polynomials stay coprime
        return RatFunc._trusted(self.num ** e, self.den ** e)

    def subst_qinv(self) -> "RatFunc":
        """f(1/q) with both sides cleared of negative powers."""
        width = max(self.num.degree, self.den.degree, 0)
        return RatFunc(self.num.reversed_to(width), self.den.reversed_to(width))

    def eval(self, x) -> Fraction:
        """
        Exact value at a rational point.

        Raises:
            PoleAtPoint: If the denominator vanishes at x
        """
        return _eval_pair(self.num, self.den, x)

    def to_fraction(self) -> "PolyFraction":
        return PolyFraction(self.num, self.den)


def _as_ratfunc(value) -> Optional[RatFunc]:
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, (int, IntPoly)):
        return RatFunc(value)
    return None


def _eval_pair(num: IntPoly, den: IntPoly, x) -> Fraction:
    x = Fraction(x)
    d = den.eval(x)
    if d == 0:
        raise PoleAtPoint(f"denominator {den} vanishes at q = {x}")
    return Fraction(num.eval(x)) / d


class PolyFraction:
    """
    Unreduced quotient of two integer polynomials.

    Arithmetic never takes a gcd, so summing many terms with shared
    denominators stays linear in the degree. Use same_value() for equality
    and canonical() to obtain the reduced RatFunc.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        num_p, den_p = _as_intpoly(num), _as_intpoly(den)
        if num_p is None or den_p is None:
            raise TypeError("PolyFraction takes IntPoly or int arguments")
        if den_p.is_zero:
            raise DivisionByZero("fraction with zero denominator")
        self.num = num_p
        self.den = den_p

    @classmethod
    def q_power(cls, e: int, c: int = 1) -> "PolyFraction":
        """The Laurent monomial c·q^e."""
        if e >= 0:
            return cls(IntPoly.monomial(c, e))
        return cls(IntPoly.constant(c), IntPoly.monomial(1, -e))

    @classmethod
    def laurent(cls, terms: Dict[int, int]) -> "PolyFraction":
        """A Laurent polynomial {exponent: coefficient} over a power of q."""
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return cls()
        low = min(min(terms), 0)
        return cls(
            IntPoly.from_terms({e - low: c for e, c in terms.items()}),
            IntPoly.monomial(1, -low),
        )

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __repr__(self) -> str:
        return f"PolyFraction(({render(self.num)})/({render(self.den)}))"

    def __add__(self, other) -> "PolyFraction":
        other = _as_fraction(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return PolyFraction(self.num + other.num, self.den)
        return PolyFraction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self) -> "PolyFraction":
        return PolyFraction(-self.num, self.den)

    def __sub__(self, other) -> "PolyFraction":
        other = _as_fraction(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "PolyFraction":
        return (-self) + other

    def __mul__(self, other) -> "PolyFraction":
        other = _as_fraction(other)
        if other is None:
            return NotImplemented
        return PolyFraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PolyFraction":
        other = _as_fraction(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise DivisionByZero("division by the zero fraction")
        return PolyFraction(self.num * other.den, self.den * other.num)

    def __pow__(self, e: int) -> "PolyFraction":
        if e < 0:
            if self.is_zero:
                raise DivisionByZero("negative power of zero")
            return PolyFraction(self.den ** (-e), self.num ** (-e))
        return PolyFraction(self.num ** e, self.den ** e)

    def same_value(self, other) -> bool:
        """Exact equality as elements of Q(q)."""
        other = _as_fraction(other)
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den == other.num * self.den

    def canonical(self) -> RatFunc:
        return RatFunc(self.num, self.den)

    def subst_qinv(self) -> "PolyFraction":
        width = max(self.num.degree, self.den.degree, 0)
        return PolyFraction(self.num.reversed_to(width), self.den.reversed_to(width))

    def eval(self, x) -> Fraction:
        return _eval_pair(self.num, self.den, x)


def _as_fraction(value) -> Optional[PolyFraction]:
    if isinstance(value, PolyFraction):
        return value
    if isinstance(value, RatFunc):
        return PolyFraction(value.num, value.den)
    if isinstance(value, (int, IntPoly)):
        return PolyFraction(value)
    return None


# ============================================================================
# Text rendering and parsing
# ============================================================================


def _render_coefficient(c) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(int(c))


def render(p: Union[IntPoly, RatPoly]) -> str:
    """Render as `c0 + c1*q + c2*q^2 + ...` in ascending degree."""
    parts: List[str] = []
    for i, c in enumerate(p.coeffs):
        if not c:
            continue
        mono = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
        magnitude = abs(c)
        if i == 0:
            body = _render_coefficient(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = f"{_render_coefficient(magnitude)}*{mono}"
        if not parts:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(parts) if parts else "0"


_TERM_RE = re.compile(r"^(\d+)?(?:(\*)?(q)(?:\^(\d+))?)?$")


def parse_poly(text: str) -> IntPoly:
    """
    Parse the rendering grammar back into an IntPoly.

    Raises:
        ParseError: If the text is not a polynomial in q with integer coefficients
    """
    compact = text.replace(" ", "")
    if not compact:
        raise ParseError("empty polynomial text")
    if compact == "0":
        return IntPoly()
    terms: Dict[int, int] = {}
    for match in re.finditer(r"([+-]?)([^+-]*)", compact):
        sign, body = match.groups()
        if not sign and not body:
            continue
        if not body:
            raise ParseError(f"dangling sign in {text!r}")
        term = _TERM_RE.match(body)
        if term is None or (term.group(1) is None and term.group(3) is None):
            raise ParseError(f"cannot parse term {body!r} in {text!r}")
        digits, star, q, exponent = term.groups()
        if star and (digits is None or q is None):
            raise ParseError(f"cannot parse term {body!r} in {text!r}")
        coefficient = int(digits) if digits is not None else 1
        degree = 0 if q is None else (int(exponent) if exponent is not None else 1)
        if sign == "-":
            coefficient = -coefficient
        terms[degree] = terms.get(degree, 0) + coefficient
    return IntPoly.from_terms(terms)
