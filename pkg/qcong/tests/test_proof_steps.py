"""
Test the replayed proof steps and the closed forms they are built from.
"""
import pytest

from qcong.errors import DomainError
from qcong.models.schemas import CheckId, ProofSection
from qcong.services.polyring import IntPoly, RatFunc
from qcong.services.proof_steps import (
    STEPS,
    ProofContext,
    a_nk,
    b_nk,
    c_nk,
    proof_chain,
    proof_step,
    section_steps,
)
from qcong.services.series_checks import series_lhs

CASE_ONE_MOD_FOUR = (CheckId.B16, CheckId.B18, CheckId.C8, CheckId.C9)
CASE_THREE_MOD_FOUR = (CheckId.B19, CheckId.B20, CheckId.C10, CheckId.C11)


def applicable_steps(n):
    """Every step that is stated for this n."""
    skip = CASE_THREE_MOD_FOUR if n % 4 == 1 else CASE_ONE_MOD_FOUR
    return [step for step in STEPS if step not in skip]


class TestClosedForms:
    """Test a_nk, b_nk and c_nk."""

    def test_b_at_zero(self):
        """Test b_{n,0} = -q(1 - qⁿ)/(1 - q)."""
        for n in (3, 5, 7):
            expected = RatFunc(IntPoly.binomial(-1, n).shift(1).scale(-1), IntPoly([1, -1]))
            assert b_nk(n, 0) == expected

    def test_c_over_a(self):
        """Test c_{7,3} / a_{7,3} = q^6."""
        assert c_nk(7, 3) / a_nk(7, 3) == RatFunc.q_power(6)

    def test_sum_of_a_is_left_side(self):
        """Test Σ_k a_{n,k} = q^((n-1)^2) · B1 left side."""
        for n in (3, 5, 7, 9):
            total = sum((a_nk(n, k) for k in range(n)), RatFunc(0))
            assert total == series_lhs(CheckId.B1, n) * RatFunc.q_power((n - 1) ** 2)

    def test_sum_of_c_is_left_side(self):
        """Test Σ_k c_{n,k} = q^(n^2) · C1 left side."""
        for n in (3, 5, 7):
            total = sum((c_nk(n, k) for k in range(n)), RatFunc(0))
            assert total == series_lhs(CheckId.C1, n) * RatFunc.q_power(n * n)

    def test_k_range(self):
        """Test k outside 0..n-1 and even n are rejected."""
        with pytest.raises(DomainError):
            a_nk(5, 5)
        with pytest.raises(DomainError):
            b_nk(5, -1)
        with pytest.raises(DomainError):
            c_nk(4, 1)


class TestProofStep:
    """Test single steps."""

    def test_morley(self):
        """Test the Morley-type congruence at n = 5."""
        result = proof_step(CheckId.MORLEY_B9, 5)
        assert result.holds
        assert result.power == 2

    def test_qpow_lemma(self):
        """Test q^27 ≡ 1 - 3(1 - q^9) modulo Φ9^2."""
        result = proof_step(CheckId.QPOW_LEMMA, 9, s=3)
        assert result.holds
        assert result.params == {"s": 3}
        assert result.valuation == 2

    def test_central_qbinom(self):
        """Test [6 3] ≡ 2 - 3(1 - q^3) modulo Φ3^2."""
        assert proof_step(CheckId.CENTRAL_QBINOM, 3).holds

    def test_identities_have_infinite_valuation(self):
        """Test that identity steps demand exact equality."""
        for step in (CheckId.B2_IDENTITY, CheckId.C2_IDENTITY, CheckId.RATIO_IDENTITY, CheckId.B12):
            result = proof_step(step, 7)
            assert result.holds, step
            assert result.valuation is None
            assert result.valuation_text() == "inf"

    def test_mod_phi_steps(self):
        """Test the steps stated modulo Φn alone."""
        assert proof_step(CheckId.QBINOM_NEGK, 7).power == 1
        assert proof_step(CheckId.B13, 7).power == 1
        assert proof_step(CheckId.B13, 9).holds

    def test_single_k(self):
        """Test a k-quantified step at one k."""
        result = proof_step(CheckId.B3, 7, k=1)
        assert result.holds
        assert result.params == {"k": 1}
        assert "1 values of k" in result.detail

    def test_all_k(self):
        """Test that omitted k runs every valid k."""
        result = proof_step(CheckId.B5, 7)
        assert result.holds
        assert result.detail.startswith("6 values of k")
        assert "lower bound" in result.detail

    def test_center_excluded(self):
        """Test that B3 and C4 reject k = (n-1)/2."""
        with pytest.raises(DomainError):
            proof_step(CheckId.B3, 7, k=3)
        with pytest.raises(DomainError):
            proof_step(CheckId.C4, 5, k=2)
        assert proof_step(CheckId.C3, 5, k=2).holds

    def test_case_steps_need_matching_residue(self):
        """Test that case steps reject n of the other residue mod 4."""
        with pytest.raises(DomainError):
            proof_step(CheckId.B16, 7)
        with pytest.raises(DomainError):
            proof_step(CheckId.C10, 5)
        assert proof_step(CheckId.B19, 7).holds
        assert proof_step(CheckId.C8, 5).holds

    def test_bad_arguments(self):
        """Test even n, n < 3, non-steps and misplaced parameters."""
        with pytest.raises(DomainError):
            proof_step(CheckId.B4, 4)
        with pytest.raises(DomainError):
            ProofContext(1)
        with pytest.raises(DomainError):
            proof_step(CheckId.A1, 5)
        with pytest.raises(DomainError):
            proof_step(CheckId.B4, 5, k=1)
        with pytest.raises(DomainError):
            proof_step(CheckId.B3, 5, s=1)

    def test_shared_context(self, cache):
        """Test that one context serves every step for its n and no other."""
        context = ProofContext(11, cache)
        for step in applicable_steps(11):
            assert proof_step(step, 11, context=context).holds, step
        with pytest.raises(ValueError):
            proof_step(CheckId.B4, 13, context=context)


class TestProofChain:
    """Test whole chains."""

    def test_section_order(self):
        """Test source order and the case pairs."""
        steps = section_steps(5, ProofSection.S2)
        assert steps[0] == CheckId.B2_IDENTITY
        assert steps[-4:] == [CheckId.B16, CheckId.QPOW_LEMMA, CheckId.B18, CheckId.B1]
        steps = section_steps(7, ProofSection.S3)
        assert steps[-3:] == [CheckId.C10, CheckId.C11, CheckId.C1]
        both = section_steps(9, ProofSection.BOTH)
        assert both == section_steps(9, ProofSection.S2) + section_steps(9, ProofSection.S3)

    def test_small_chains(self, cache):
        """Test both sections for n = 3 .. 13."""
        for n in range(3, 14, 2):
            results = proof_chain(n, ProofSection.BOTH, cache)
            assert [r.check for r in results] == [s.value for s in section_steps(n, ProofSection.BOTH)]
            assert all(r.holds for r in results), [r.check for r in results if not r.holds]

    def test_boundary_n_one(self):
        """Test that n = 1 only runs the concluding series checks."""
        results = proof_chain(1)
        assert [r.check for r in results] == ["b1", "c1"]
        assert all(r.holds for r in results)
        assert [r.check for r in proof_chain(1, ProofSection.S3)] == ["c1"]

    def test_even_n_rejected(self):
        """Test that even n raises."""
        with pytest.raises(DomainError):
            proof_chain(2)

    @pytest.mark.slow
    def test_full_replay(self, cache):
        """Test every step of both chains for odd n <= 99."""
        for n in range(3, 100, 2):
            failed = [r.check for r in proof_chain(n, ProofSection.BOTH, cache) if not r.holds]
            assert not failed, (n, failed)

    @pytest.mark.slow
    def test_chain_consistency(self):
        """Test Σ a_nk and Σ c_nk against the left sides for odd n <= 99."""
        for n in range(3, 100, 2):
            assert proof_step(CheckId.B2_IDENTITY, n).holds, n
            assert proof_step(CheckId.C2_IDENTITY, n).holds, n
