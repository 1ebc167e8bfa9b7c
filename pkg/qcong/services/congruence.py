"""
Congruences of rational functions modulo powers of a cyclotomic polynomial.

Three levels of precision live here:
  - exact Φₙ-adic valuations of RatFunc / PolyFraction values;
  - ResidueRing, the quotient ℚ[q]/Φₙ(q)^m with canonical representatives;
  - CoverRing, the integer quotient ℤ[q]/(qⁿ - 1)^m that large sums are
    accumulated in. Φₙ^m divides (qⁿ - 1)^m, so divisibility by Φₙ^j with
    j <= m is well defined on cover classes.
"""

import logging
import math
from collections import Counter
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field

from qcong.errors import DivisionByZero, NotInvertible
from qcong.services.cyclotomic import CyclotomicCache, cyclotomic, totient
from qcong.services.polyring import IntPoly, PolyFraction, RatFunc, RatPoly
from qcong.services.qseries import Factor, TermRatio

logger = logging.getLogger(__name__)

INF = math.inf

Valuation = Union[int, float]
CoverVector = List[int]


class CongruenceVerdict(BaseModel):
    """Outcome of comparing two values modulo Φₙ(q)^m."""

    holds: bool = Field(..., description="denominator_coprime and valuation >= m")
    valuation: Valuation = Field(..., description="Φₙ-adic valuation of the difference, inf when equal")
    denominator_coprime: bool = Field(default=True, description="Whether the congruence is well posed")
    exact: bool = Field(default=True, description="False when the valuation is only a lower bound")


# ============================================================================
# Exact valuations
# ============================================================================


def fold_cover(coeffs: Sequence[int], n: int, m: int) -> CoverVector:
    """Reduce a coefficient list modulo (qⁿ - 1)^m, m in {1, 2}."""
    out = [0] * (m * n)
    if m == 1:
        for start in range(0, len(coeffs), n):
            block = coeffs[start : start + n]
            out[: len(block)] = [x + y for x, y in zip(out, block)]
        return out
    # q^(a·n + b) ≡ (1 - a)·q^b + a·q^(b + n)
    for a, start in enumerate(range(0, len(coeffs), n)):
        block = coeffs[start : start + n]
        width = len(block)
        if a == 0:
            out[:width] = [x + y for x, y in zip(out, block)]
            continue
        if a != 1:
            out[:width] = [x + (1 - a) * y for x, y in zip(out, block)]
        out[n : n + width] = [x + a * y for x, y in zip(out[n:], block)]
    return out


def _divisible_by_phi(p: IntPoly, n: int, phi: IntPoly) -> bool:
    """Φₙ | p, tested after folding p modulo qⁿ - 1."""
    folded = IntPoly(fold_cover(p.coeffs, n, 1))
    return folded.rem_monic(phi).is_zero


def poly_phi_valuation(p: IntPoly, n: int, phi: IntPoly) -> Valuation:
    """Multiplicity of Φₙ in p by repeated exact division; INF for p = 0."""
    if p.is_zero:
        return INF
    v = 0
    while _divisible_by_phi(p, n, phi):
        p = p.exact_div(phi)
        v += 1
    return v


def _as_fraction(f) -> PolyFraction:
    if isinstance(f, PolyFraction):
        return f
    if isinstance(f, RatFunc):
        return f.to_fraction()
    return PolyFraction(f)


def phi_valuation(
    f: Union[RatFunc, PolyFraction, IntPoly, int],
    n: int,
    cache: Optional[CyclotomicCache] = None,
) -> Valuation:
    """
    Φₙ-adic valuation: multiplicity in the numerator minus multiplicity in
    the denominator, INF for zero.
    """
    f = _as_fraction(f)
    if f.is_zero:
        return INF
    phi = cyclotomic(n, cache)
    return poly_phi_valuation(f.num, n, phi) - poly_phi_valuation(f.den, n, phi)


def congruent_mod(
    f: Union[RatFunc, PolyFraction, IntPoly, int],
    g: Union[RatFunc, PolyFraction, IntPoly, int],
    n: int,
    m: int,
    cache: Optional[CyclotomicCache] = None,
) -> CongruenceVerdict:
    """
    Decide f ≡ g (mod Φₙ(q)^m) exactly.

    Args:
        f: Left side
        g: Right side
        n: Cyclotomic index
        m: Modulus power

    Returns:
        Verdict with the exact valuation of f - g. An ill-posed comparison
        (Φₙ left in the reduced denominator) is reported, not raised.
    """
    diff = _as_fraction(f) - _as_fraction(g)
    if diff.is_zero:
        return CongruenceVerdict(holds=True, valuation=INF)
    v = phi_valuation(diff, n, cache)
    coprime = v >= 0
    if not coprime:
        logger.warning(f"Congruence mod Φ_{n}^{m} is ill posed: difference has valuation {v}")
    logger.debug(f"congruent_mod n={n} m={m}: valuation {v}")
    return CongruenceVerdict(holds=coprime and v >= m, valuation=v, denominator_coprime=coprime)


# ============================================================================
# Residue ring ℚ[q]/Φₙ(q)^m
# ============================================================================


class ResidueRing:
    """ℚ[q]/Φₙ(q)^m. Immutable after construction."""

    def __init__(
        self,
        n: int,
        m: int,
        cache: Optional[CyclotomicCache] = None,
        phi: Optional[IntPoly] = None,
    ):
        if n < 1 or m < 1:
            raise ValueError(f"residue ring needs n >= 1 and m >= 1, got n={n}, m={m}")
        self.n = n
        self.m = m
        self.phi = phi if phi is not None else cyclotomic(n, cache)
        self._lower: Dict[int, "ResidueRing"] = {}
        self.modulus = self.phi**m
        self.degree = m * totient(n)
        self._rat_modulus = RatPoly.from_intpoly(self.modulus)

    def __repr__(self) -> str:
        return f"ResidueRing(n={self.n}, m={self.m})"

    def element(self, rep: Union[RatPoly, IntPoly, int, Fraction]) -> "ResidueElem":
        if isinstance(rep, IntPoly):
            return self.reduce_poly(rep)
        if not isinstance(rep, RatPoly):
            rep = RatPoly([rep])
        if rep.degree >= self.degree:
            rep = rep.divrem(self._rat_modulus)[1]
        return ResidueElem(self, rep)

    def zero(self) -> "ResidueElem":
        return ResidueElem(self, RatPoly())

    def one(self) -> "ResidueElem":
        return ResidueElem(self, RatPoly([1]))

    def reduce_poly(self, p: IntPoly) -> "ResidueElem":
        """Image of an integer polynomial; folds modulo (qⁿ - 1)^m first."""
        if len(p) > self.m * self.n:
            p = IntPoly(fold_cover(p.coeffs, self.n, self.m))
        return ResidueElem(self, RatPoly.from_intpoly(p.rem_monic(self.modulus)))

    def from_cover(self, vector: CoverVector) -> "ResidueElem":
        """Image of a cover class in ℤ[q]/(qⁿ - 1)^m."""
        return ResidueElem(self, RatPoly.from_intpoly(IntPoly(vector).rem_monic(self.modulus)))

    def project(self, elem: "ResidueElem", m: int) -> "ResidueElem":
        """Image in ℚ[q]/Φₙ^m for a smaller power m."""
        if m > self.m:
            raise ValueError(f"cannot project from power {self.m} up to {m}")
        if m == self.m:
            return elem
        target = self._lower.get(m)
        if target is None:
            target = self._lower.setdefault(m, ResidueRing(self.n, m, phi=self.phi))
        return target.element(elem.rep)

    def q_power(self, e: int) -> "ResidueElem":
        """q^e by square-and-multiply; negative e goes through the inverse of q."""
        base = self.element(RatPoly([0, 1]))
        if e < 0:
            base = ring_inv(base)
            e = -e
        result = self.one()
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result


class ResidueElem:
    """Canonical representative of a class in a ResidueRing."""

    __slots__ = ("ring", "rep")

    def __init__(self, ring: ResidueRing, rep: RatPoly):
        self.ring = ring
        self.rep = rep

    @property
    def is_zero(self) -> bool:
        return self.rep.is_zero

    def _check(self, other: "ResidueElem") -> None:
        if other.ring.n != self.ring.n or other.ring.m != self.ring.m:
            raise ValueError(f"mixing residues of {self.ring} and {other.ring}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ResidueElem):
            return NotImplemented
        return self.ring.n == other.ring.n and self.ring.m == other.ring.m and self.rep == other.rep

    def __hash__(self) -> int:
        return hash((self.ring.n, self.ring.m, self.rep))

    def __repr__(self) -> str:
        return f"ResidueElem({self.rep} mod Φ_{self.ring.n}^{self.ring.m})"

    def __add__(self, other: "ResidueElem") -> "ResidueElem":
        self._check(other)
        return ResidueElem(self.ring, self.rep + other.rep)

    def __neg__(self) -> "ResidueElem":
        return ResidueElem(self.ring, -self.rep)

    def __sub__(self, other: "ResidueElem") -> "ResidueElem":
        self._check(other)
        return ResidueElem(self.ring, self.rep - other.rep)

    def __mul__(self, other) -> "ResidueElem":
        if isinstance(other, (int, Fraction)):
            return ResidueElem(self.ring, self.rep.scale(other))
        self._check(other)
        return self.ring.element(self.rep * other.rep)

    __rmul__ = __mul__


def ring_inv(e: ResidueElem) -> ResidueElem:
    """
    Multiplicative inverse by extended Euclid over ℚ[q].

    Raises:
        NotInvertible: If the representative shares a factor with Φₙ^m
    """
    ring = e.ring
    r0, r1 = ring._rat_modulus, e.rep
    s0, s1 = RatPoly(), RatPoly([1])
    while not r1.is_zero:
        quotient, remainder = r0.divrem(r1)
        r0, r1 = r1, remainder
        s0, s1 = s1, s0 - quotient * s1
    if r0.degree != 0:
        raise NotInvertible(f"{e.rep} is not invertible modulo Φ_{ring.n}^{ring.m}")
    return ring.element(s0.scale(1 / r0.lc))


def ring_reduce(
    f: Union[RatFunc, PolyFraction, IntPoly, int], ring: ResidueRing
) -> ResidueElem:
    """
    Residue class of f; the denominator is inverted in the ring.

    Raises:
        NotInvertible: If den(f) shares a factor with Φₙ
    """
    f = _as_fraction(f)
    num = ring.reduce_poly(f.num)
    if f.den == IntPoly.one():
        return num
    return num * ring_inv(ring.reduce_poly(f.den))


# ============================================================================
# Cover ring ℤ[q]/(qⁿ - 1)^m
# ============================================================================


class CoverRing:
    """
    ℤ[q]/(qⁿ - 1)^m for m in {1, 2}, elements are integer vectors of length m·n.

    Monomials are units here, so multiplying by q^e costs O(n) for any
    integer e.
    """

    def __init__(self, n: int, m: int, cache: Optional[CyclotomicCache] = None):
        if m not in (1, 2):
            raise ValueError(f"cover ring supports m in (1, 2), got {m}")
        self.n = n
        self.m = m
        self.size = m * n
        self.residue = ResidueRing(n, m, cache)

    def __repr__(self) -> str:
        return f"CoverRing(n={self.n}, m={self.m})"

    def zero(self) -> CoverVector:
        return [0] * self.size

    def one(self) -> CoverVector:
        return self.constant(1)

    def constant(self, c: int) -> CoverVector:
        out = self.zero()
        out[0] = c
        return out

    def from_poly(self, p: IntPoly) -> CoverVector:
        return fold_cover(p.coeffs, self.n, self.m)

    def from_laurent(self, terms: Dict[int, int]) -> CoverVector:
        """Image of Σ c·q^e with any integer exponents."""
        out = self.zero()
        for e, c in terms.items():
            if c:
                out = self.add(out, self.mul_monomial(self.constant(c), 1, e))
        return out

    def add(self, x: CoverVector, y: CoverVector) -> CoverVector:
        return [a + b for a, b in zip(x, y)]

    def sub(self, x: CoverVector, y: CoverVector) -> CoverVector:
        return [a - b for a, b in zip(x, y)]

    def scale(self, x: CoverVector, c: int) -> CoverVector:
        if c == 1:
            return x
        return [c * a for a in x]

    def _times_qn(self, x: CoverVector) -> CoverVector:
        """qⁿ·x, using q^(2n) ≡ 2qⁿ - 1."""
        if self.m == 1:
            return x
        n = self.n
        lo, hi = x[:n], x[n:]
        return [-h for h in hi] + [a + 2 * h for a, h in zip(lo, hi)]

    def mul_monomial(self, x: CoverVector, c: int, e: int) -> CoverVector:
        """c·q^e·x for any integer e."""
        a, b = divmod(e, self.n)
        if b:
            x = fold_cover([0] * b + x, self.n, self.m)
        if self.m == 2 and a:
            # q^(a·n) ≡ (1 - a) + a·qⁿ
            shifted = self._times_qn(x)
            x = [(1 - a) * u + a * v for u, v in zip(x, shifted)]
        return self.scale(x, c)

    def mul_binomial(self, x: CoverVector, c: int, e: int) -> CoverVector:
        """(1 + c·q^e)·x for any integer e."""
        if e == 0:
            return self.scale(x, 1 + c)
        return self.add(x, self.mul_monomial(x, c, e))

    def mul_factor(self, x: CoverVector, f: Factor) -> CoverVector:
        if f.binomial:
            return self.mul_binomial(x, f.coeff, f.exponent)
        return self.mul_monomial(x, f.coeff, f.exponent)

    def mul(self, x: CoverVector, y: CoverVector) -> CoverVector:
        return self.from_poly(IntPoly(x) * IntPoly(y))

    def is_coprime_factor(self, f: Factor) -> bool:
        """Whether a factor is a unit modulo Φₙ."""
        if not f.binomial:
            return True
        if f.coeff == -1:
            return f.exponent % self.n != 0
        # 1 + q^e vanishes at ζ iff ζ^e = -1
        return not ((2 * f.exponent) % self.n == 0 and f.exponent % self.n != 0)

    def valuation(self, x: CoverVector) -> int:
        """Φₙ-adic valuation of a cover class, capped at m."""
        residue = self.residue.from_cover(x)
        if residue.is_zero:
            return self.m
        v = 0
        for power in range(self.m - 1, 0, -1):
            if self.residue.project(residue, power).is_zero:
                v = power
                break
        return v

    def horner(
        self, first: Tuple[Sequence[Factor], Sequence[Factor]], ratios: Sequence[TermRatio]
    ) -> Tuple[CoverVector, CoverVector, List[Factor]]:
        """
        Σ_k t_k as X / Y with t_0 = first and t_{k+1} = t_k · ratios[k].

        Denominator monomials are moved into X as inverse powers, so Y is a
        product of binomials only.

        Returns:
            (X, Y, denominator binomials of Y)
        """
        x, y = self.one(), self.one()
        den_factors: List[Factor] = []
        for ratio in reversed(ratios):
            rd = [f for f in ratio.den if f.binomial]
            for f in rd:
                y = self.mul_factor(y, f)
            den_factors.extend(rd)
            for f in ratio.num:
                x = self.mul_factor(x, f)
            for f in ratio.den:
                if not f.binomial:
                    x = self.mul_monomial(x, f.coeff, -f.exponent)
            x = self.add(y, x)
        first_num, first_den = first
        for f in first_num:
            x = self.mul_factor(x, f)
        for f in first_den:
            if f.binomial:
                y = self.mul_factor(y, f)
                den_factors.append(f)
            else:
                x = self.mul_monomial(x, f.coeff, -f.exponent)
        return x, y, den_factors


class CoverFraction:
    """
    A dense cover numerator over a symbolic denominator.

    The denominator is an integer times a multiset of binomials 1 + c·q^e
    (e >= 1); monomials are units and live in the numerator.
    """

    __slots__ = ("ring", "num", "den", "scale")

    def __init__(
        self,
        ring: CoverRing,
        num: CoverVector,
        den: Optional[Counter] = None,
        scale: int = 1,
    ):
        if scale == 0:
            raise DivisionByZero("cover fraction with zero denominator")
        if scale < 0:
            num, scale = [-a for a in num], -scale
        self.ring = ring
        self.num = num
        self.den = Counter(den or {})
        self.scale = scale

    @classmethod
    def from_factors(
        cls,
        ring: CoverRing,
        num: Iterable[Factor] = (),
        den: Iterable[Factor] = (),
        coeff: Union[int, Fraction] = 1,
    ) -> "CoverFraction":
        coeff = Fraction(coeff)
        start = cls(ring, ring.constant(coeff.numerator), scale=coeff.denominator)
        return start.mul_factors(num, den)

    @classmethod
    def from_poly(cls, ring: CoverRing, p: IntPoly, coeff: Union[int, Fraction] = 1) -> "CoverFraction":
        coeff = Fraction(coeff)
        return cls(ring, ring.scale(ring.from_poly(p), coeff.numerator), scale=coeff.denominator)

    @classmethod
    def from_laurent(cls, ring: CoverRing, terms: Dict[int, Union[int, Fraction]]) -> "CoverFraction":
        """Σ c·q^e with rational coefficients and any integer exponents."""
        scale = 1
        for c in terms.values():
            scale = scale * Fraction(c).denominator // math.gcd(scale, Fraction(c).denominator)
        ints = {e: int(Fraction(c) * scale) for e, c in terms.items()}
        return cls(ring, ring.from_laurent(ints), scale=scale)

    def __repr__(self) -> str:
        dens = " ".join(f"(1{'+' if c > 0 else '-'}q^{e})^{k}" for (c, e), k in sorted(self.den.items()))
        return f"CoverFraction(n={self.ring.n}, m={self.ring.m}, den={self.scale} {dens})"

    def _expand(self, target: Counter, target_scale: int) -> CoverVector:
        vector = self.ring.scale(self.num, target_scale // self.scale)
        for (c, e), k in target.items():
            for _ in range(k - self.den.get((c, e), 0)):
                vector = self.ring.mul_binomial(vector, c, e)
        return vector

    def __add__(self, other: "CoverFraction") -> "CoverFraction":
        den = self.den | other.den
        scale = self.scale * other.scale // math.gcd(self.scale, other.scale)
        num = self.ring.add(self._expand(den, scale), other._expand(den, scale))
        return CoverFraction(self.ring, num, den, scale)

    def __neg__(self) -> "CoverFraction":
        return CoverFraction(self.ring, [-a for a in self.num], self.den, self.scale)

    def __sub__(self, other: "CoverFraction") -> "CoverFraction":
        return self + (-other)

    def __mul__(self, other) -> "CoverFraction":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CoverFraction(
                self.ring,
                self.ring.scale(self.num, other.numerator),
                self.den,
                self.scale * other.denominator,
            )
        return CoverFraction(
            self.ring,
            self.ring.mul(self.num, other.num),
            self.den + other.den,
            self.scale * other.scale,
        )

    __rmul__ = __mul__

    def mul_factors(self, num: Iterable[Factor] = (), den: Iterable[Factor] = ()) -> "CoverFraction":
        """Multiply by ∏ num / ∏ den, one sparse factor at a time."""
        ring = self.ring
        vector = self.num
        scale = self.scale
        den_counter = Counter(self.den)
        for f in num:
            vector = ring.mul_factor(vector, f)
        for f in den:
            if not f.binomial:
                vector = ring.mul_monomial(vector, f.coeff, -f.exponent)
            elif f.exponent == 0:
                if f.coeff == -1:
                    raise DivisionByZero("denominator factor 1 - q^0 is zero")
                scale *= 1 + f.coeff
            else:
                den_counter[(f.coeff, f.exponent)] += 1
        return CoverFraction(ring, vector, den_counter, scale)

    def bad_factors(self) -> int:
        """Number of denominator binomials divisible by Φₙ, with multiplicity."""
        return sum(
            k for (c, e), k in self.den.items() if not self.ring.is_coprime_factor(Factor.bin(c, e))
        )

    def compare(self, other: "CoverFraction") -> CongruenceVerdict:
        """
        Decide self ≡ other (mod Φₙ^m).

        The valuation is capped at m, so a passing comparison only reports a
        lower bound.
        """
        diff = self - other
        bad = diff.bad_factors()
        v = self.ring.valuation(diff.num) - bad
        coprime = bad == 0
        if not coprime:
            logger.warning(f"Ill-posed cover comparison for n={self.ring.n}: {bad} denominator factors vanish")
        return CongruenceVerdict(
            holds=coprime and v >= self.ring.m,
            valuation=v,
            denominator_coprime=coprime,
            exact=False,
        )
