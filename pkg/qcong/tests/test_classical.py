"""
Test the classical central-binomial congruences and the q → 1 link.
"""
from fractions import Fraction

import pytest
from pydantic import ValidationError

from qcong.errors import DomainError, EvenPrimeRejected, NotInvertible, NotPrime
from qcong.models.schemas import CheckId, ClassicalParams
from qcong.services.classical import (
    central_binomial_sum,
    classical_check,
    extended_gcd,
    mod_inverse,
    q_to_1_consistency,
    series_value_at_one,
)
from qcong.services.cyclotomic import is_prime


class TestModularHelpers:
    """Test gcd, inverses and the modular sum."""

    def test_extended_gcd(self):
        """Test the Bézout identity."""
        g, x, y = extended_gcd(240, 46)
        assert g == 2
        assert 240 * x + 46 * y == 2

    def test_mod_inverse(self):
        """Test inverses modulo 25 and a non-invertible class."""
        assert mod_inverse(8, 25) == 22
        assert mod_inverse(2, 9) == 5
        with pytest.raises(NotInvertible):
            mod_inverse(2, 4)

    def test_central_binomial_sum(self):
        """Test 1 + 1 + 3/2 + 5/2 + 35/8 = 83/8 ≡ 1 modulo 25."""
        assert central_binomial_sum(5, 25) == 1
        assert central_binomial_sum(3, 9) == 8


class TestClassicalCheck:
    """Test the Sun-Tauraso and Sun congruences."""

    def test_three_modulo_nine(self):
        """Test p = 3 modulo 9, where the sum is 7/2 ≡ 8 ≡ -1."""
        result = classical_check(ClassicalParams(p=3, r=1, power=2))
        assert result.holds
        assert result.check == CheckId.SUN.value
        assert result.params == {"p": 3, "r": 1}
        assert result.n == 3

    def test_five_modulo_five(self):
        """Test p = 5 modulo 5."""
        result = classical_check(ClassicalParams(p=5, r=1, power=1))
        assert result.holds
        assert result.check == CheckId.SUN_TAURASO.value

    def test_prime_power(self):
        """Test p^r = 9 modulo 9."""
        result = classical_check(ClassicalParams(p=3, r=2, power=2))
        assert result.holds
        assert result.n == 9

    def test_rejects_bad_primes(self):
        """Test composite and even p."""
        with pytest.raises(NotPrime):
            classical_check(ClassicalParams(p=9))
        with pytest.raises(EvenPrimeRejected):
            classical_check(ClassicalParams(p=2))
        assert issubclass(NotPrime, DomainError)

    def test_params_bounds(self):
        """Test pydantic bounds on p, r and the power."""
        with pytest.raises(ValidationError):
            ClassicalParams(p=1)
        with pytest.raises(ValidationError):
            ClassicalParams(p=3, r=0)
        with pytest.raises(ValidationError):
            ClassicalParams(p=3, power=3)

    @pytest.mark.slow
    def test_primes_below_200(self):
        """Test both congruences for every odd prime below 200."""
        for p in filter(is_prime, range(3, 200)):
            for power in (1, 2):
                assert classical_check(ClassicalParams(p=p, power=power)).holds, (p, power)

    @pytest.mark.slow
    def test_prime_squares_below_50(self):
        """Test p^2 for odd primes below 50."""
        for p in filter(is_prime, range(3, 50)):
            assert classical_check(ClassicalParams(p=p, r=2, power=2)).holds, p


class TestQToOne:
    """Test the classical limits of the q-congruences."""

    def test_value_at_one(self):
        """Test the first series at q = 1 for n = 3 and n = 5."""
        assert series_value_at_one(CheckId.ANEW3, 3) == Fraction(7, 2)
        assert series_value_at_one(CheckId.A2, 5) == Fraction(83, 8)

    def test_anew3(self):
        """Test 7/2 - (-1) = 9/2 vanishes modulo 3."""
        result = q_to_1_consistency(CheckId.ANEW3, 3)
        assert result.holds
        assert result.check == CheckId.Q_TO_1.value
        assert result.params == {"target": "anew3", "p": 3, "r": 1}
        assert result.detail == "LHS(1) = 7/2, RHS(1) = -1"

    def test_a1_and_a2(self):
        """Test the new congruences at p = 3 and p = 5 modulo p^2."""
        assert q_to_1_consistency(CheckId.A1, 3).holds
        result = q_to_1_consistency(CheckId.A2, 5)
        assert result.holds
        assert result.power == 2

    def test_rejects_other_targets(self):
        """Test a series without a classical counterpart and a large p^r."""
        with pytest.raises(DomainError):
            q_to_1_consistency(CheckId.ANEW5, 3)
        with pytest.raises(DomainError):
            q_to_1_consistency(CheckId.A1, 53)
        with pytest.raises(DomainError):
            q_to_1_consistency(CheckId.A1, 3, r=4)

    @pytest.mark.slow
    def test_all_targets(self):
        """Test every target at p^r in {3, 5, 7, 9, 25, 27, 49}."""
        for p, r in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (7, 2)]:
            for target in (CheckId.ANEW3, CheckId.ANEW4, CheckId.A1, CheckId.A2):
                assert q_to_1_consistency(target, p, r).holds, (target, p, r)
