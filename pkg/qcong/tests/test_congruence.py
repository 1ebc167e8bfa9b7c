"""
Test Φn-adic valuations, exact congruences, the residue ring and the cover ring.
"""
from fractions import Fraction

import pytest

from qcong.errors import NotInvertible
from qcong.models.schemas import CheckId
from qcong.services.congruence import (
    INF,
    CoverFraction,
    CoverRing,
    ResidueRing,
    congruent_mod,
    fold_cover,
    phi_valuation,
    ring_inv,
    ring_reduce,
)
from qcong.services.cyclotomic import cyclotomic
from qcong.services.polyring import IntPoly, PolyFraction, RatFunc
from qcong.services.qseries import Factor
from qcong.services.series_checks import series_lhs

ONE_MINUS_Q5 = IntPoly.binomial(-1, 5)


class TestValuation:
    """Test exact Φn-adic valuations."""

    def test_square(self):
        """Test v5((1 - q^5)^2) = 2."""
        assert phi_valuation(ONE_MINUS_Q5 ** 2, 5) == 2

    def test_denominator(self):
        """Test v5(1/(1 - q^5)) = -1."""
        assert phi_valuation(RatFunc(1, ONE_MINUS_Q5), 5) == -1

    def test_coprime_and_zero(self):
        """Test a unit and the zero function."""
        assert phi_valuation(IntPoly([1, 1]), 5) == 0
        assert phi_valuation(0, 5) == INF

    def test_other_cyclotomic_factors_ignored(self, cache):
        """Test that Φ1 and Φ3 do not count towards v9."""
        f = IntPoly.binomial(-1, 9) * IntPoly.binomial(-1, 3)
        assert phi_valuation(f, 9, cache) == 1


class TestCongruentMod:
    """Test exact congruence verdicts."""

    def test_qpow_square(self):
        """Test q^6 ≡ 2q^3 - 1 mod Φ3^2, the difference being (q^3 - 1)^2."""
        verdict = congruent_mod(IntPoly.monomial(1, 6), IntPoly([-1, 0, 0, 2]), 3, 2)
        assert verdict.holds
        assert verdict.valuation == 2
        assert verdict.exact

    def test_identity(self):
        """Test f ≡ f with infinite valuation."""
        f = RatFunc(IntPoly([1, 2]), IntPoly([3, 0, 1]))
        verdict = congruent_mod(f, f, 7, 2)
        assert verdict.holds
        assert verdict.valuation == INF

    def test_guo_zeng_at_three(self):
        """Test the first series sum at n = 3 is -q^2 mod Φ3^2."""
        verdict = congruent_mod(series_lhs(CheckId.ANEW3, 3), RatFunc.q_power(2, -1), 3, 2)
        assert verdict.holds
        assert verdict.valuation == 2

    def test_failure_reports_valuation(self):
        """Test that a mod-Φ5 congruence does not lift to Φ5^2."""
        verdict = congruent_mod(IntPoly.monomial(1, 5), 1, 5, 2)
        assert verdict.valuation == 1
        assert not verdict.holds
        assert congruent_mod(IntPoly.monomial(1, 5), 1, 5, 1).holds

    def test_ill_posed(self):
        """Test that Φn in the reduced denominator is reported, not raised."""
        verdict = congruent_mod(RatFunc(1, ONE_MINUS_Q5), 0, 5, 1)
        assert not verdict.holds
        assert not verdict.denominator_coprime
        assert verdict.valuation == -1

    def test_accepts_unreduced_fractions(self):
        """Test PolyFraction inputs."""
        f = PolyFraction(ONE_MINUS_Q5 * IntPoly([1, 1]), IntPoly([1, 1]))
        assert congruent_mod(f, 0, 5, 1).holds


class TestFoldCover:
    """Test reduction modulo (q^n - 1)^m."""

    def test_fold_m1(self):
        """Test q^7 ≡ q mod q^3 - 1."""
        assert fold_cover([0] * 7 + [1], 3, 1) == [0, 1, 0]

    def test_fold_m2(self):
        """Test q^6 ≡ 2q^3 - 1 mod (q^3 - 1)^2."""
        assert fold_cover([0] * 6 + [1], 3, 2) == [-1, 0, 0, 2, 0, 0]


class TestResidueRing:
    """Test reduction and inversion in Q[q]/Φn^m."""

    def test_qn_is_one_mod_phi(self):
        """Test q^5 reduces to 1 modulo Φ5."""
        ring = ResidueRing(5, 1)
        assert ring_reduce(IntPoly.monomial(1, 5), ring) == ring.one()

    def test_inverse_of_one_minus_q(self):
        """Test 1/(1 - q) times (1 - q) is 1 modulo Φ5^2."""
        ring = ResidueRing(5, 2)
        e = ring_reduce(RatFunc(1, IntPoly([1, -1])), ring)
        assert e * ring.reduce_poly(IntPoly([1, -1])) == ring.one()

    def test_pole_not_invertible(self):
        """Test 1/(1 - q^5) has no residue modulo Φ5."""
        with pytest.raises(NotInvertible):
            ring_reduce(RatFunc(1, ONE_MINUS_Q5), ResidueRing(5, 1))

    def test_ring_inv(self):
        """Test inverses of 1 and 1 + q, and Φ5 being a zero divisor."""
        ring = ResidueRing(5, 2)
        assert ring_inv(ring.one()) == ring.one()
        e = ring.reduce_poly(IntPoly([1, 1]))
        assert e * ring_inv(e) == ring.one()
        with pytest.raises(NotInvertible):
            ring_inv(ring.reduce_poly(cyclotomic(5)))

    def test_q_power(self):
        """Test square-and-multiply powers, including negative exponents."""
        ring = ResidueRing(7, 2)
        assert ring.q_power(100) == ring.reduce_poly(IntPoly.monomial(1, 100))
        assert ring.q_power(-3) * ring.q_power(3) == ring.one()

    def test_matches_exact_valuation(self):
        """Test that residue equality agrees with exact valuations."""
        ring = ResidueRing(9, 2)
        f = IntPoly.monomial(1, 27)
        g = IntPoly([-2, 0, 0, 0, 0, 0, 0, 0, 0, 3])
        assert ring.reduce_poly(f) == ring.reduce_poly(g)
        assert congruent_mod(f, g, 9, 2).holds


class TestCoverRing:
    """Test the cover ring and symbolic-denominator fractions."""

    def test_negative_monomial(self):
        """Test q^-3 ≡ 2 - q^3 mod (q^3 - 1)^2."""
        ring = CoverRing(3, 2)
        assert ring.mul_monomial(ring.one(), 1, -3) == [2, 0, 0, -1, 0, 0]

    def test_from_laurent_matches_poly(self):
        """Test that shifting by q^n agrees with folding."""
        ring = CoverRing(5, 2)
        assert ring.from_laurent({12: 3, 1: -1}) == ring.from_poly(IntPoly.from_terms({12: 3, 1: -1}))

    def test_coprime_factors(self):
        """Test which binomials are units modulo Φn."""
        ring = CoverRing(5, 2)
        assert ring.is_coprime_factor(Factor.bin(-1, 3))
        assert not ring.is_coprime_factor(Factor.bin(-1, 10))
        assert ring.is_coprime_factor(Factor.bin(1, 5))
        assert not CoverRing(6, 1).is_coprime_factor(Factor.bin(1, 3))

    def test_valuation_capped(self):
        """Test valuations 0, 1 and the cap m = 2."""
        ring = CoverRing(5, 2)
        assert ring.valuation(ring.one()) == 0
        assert ring.valuation(ring.from_poly(cyclotomic(5))) == 1
        assert ring.valuation(ring.from_poly(ONE_MINUS_Q5 ** 3)) == 2

    def test_fraction_compare(self):
        """Test (1 - q^5)/(1 - q) ≡ 0 mod Φ5 but not mod Φ5^2."""
        ring = CoverRing(5, 2)
        zero = CoverFraction(ring, ring.zero())
        f = CoverFraction.from_factors(ring, [Factor.bin(-1, 5)], [Factor.bin(-1, 1)])
        verdict = f.compare(zero)
        assert verdict.valuation == 1
        assert not verdict.holds
        assert not verdict.exact

        g = CoverFraction.from_factors(ring, [Factor.bin(-1, 5)] * 2, [Factor.bin(-1, 1)])
        assert g.compare(zero).holds

    def test_fraction_arithmetic(self):
        """Test 1/(1 - q) + 1/(1 + q) = 2/(1 - q^2) in the cover ring."""
        ring = CoverRing(7, 2)
        left = CoverFraction.from_factors(ring, den=[Factor.bin(-1, 1)]) + CoverFraction.from_factors(
            ring, den=[Factor.bin(1, 1)]
        )
        right = CoverFraction.from_factors(ring, den=[Factor.bin(-1, 2)], coeff=2)
        assert left.compare(right).holds
        assert (left * 3).compare(right * 3).holds

    def test_fraction_ill_posed(self):
        """Test a vanishing denominator factor is flagged."""
        ring = CoverRing(5, 1)
        f = CoverFraction.from_factors(ring, den=[Factor.bin(-1, 5)])
        verdict = f.compare(CoverFraction(ring, ring.zero()))
        assert not verdict.denominator_coprime
        assert not verdict.holds
        assert f.bad_factors() == 1

    def test_rational_laurent(self):
        """Test rational coefficients in from_laurent."""
        ring = CoverRing(3, 2)
        f = CoverFraction.from_laurent(ring, {0: Fraction(1, 2), 3: Fraction(1, 2)})
        g = CoverFraction.from_laurent(ring, {0: 1})
        # (1 + q^3)/2 - 1 = (q^3 - 1)/2
        verdict = f.compare(g)
        assert verdict.valuation == 1
