import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weyl_lab.core.errors import LabValidationError, PhaseRangeError
from weyl_lab.features.weyl_core.application.evaluator import (
    flat_sum_demo,
    phase_eval,
    prefix_max,
    weyl_sum,
)
from weyl_lab.features.weyl_core.application.weights import weight_values
from weyl_lab.features.weyl_core.domain.models import (
    GeneralPhase,
    MonomialPhase,
    PhaseVector,
    WeightSeq,
)


class TestPhaseEval:
    def test_zero_phase(self) -> None:
        assert phase_eval(PhaseVector.zero(4), 17) == 0.0

    def test_direct_arithmetic(self) -> None:
        assert phase_eval(PhaseVector((0.25, 0.5)), 2) == 0.5

    def test_monomial(self) -> None:
        assert phase_eval(MonomialPhase(1 / 3, 3), 2) == pytest.approx(2 / 3, abs=1e-15)

    def test_power_phase_matches_monomial_for_integer_gamma(self) -> None:
        """gamma が整数なら単項式と同じ厳密経路で評価される"""
        assert phase_eval(GeneralPhase.power(0.3, 3.0), 12345) == phase_eval(
            MonomialPhase(0.3, 3), 12345
        )

    def test_n_must_be_positive(self) -> None:
        with pytest.raises(LabValidationError):
            phase_eval(PhaseVector((0.1,)), 0)

    def test_range_error(self) -> None:
        with pytest.raises(PhaseRangeError):
            phase_eval(MonomialPhase(0.1, 6), 2**20)

    def test_coefficients_must_be_reduced(self) -> None:
        with pytest.raises(LabValidationError):
            PhaseVector((1.0,))


class TestWeylSum:
    def test_all_ones(self) -> None:
        assert weyl_sum(PhaseVector((0.0,)), WeightSeq.ones(), 100).value == 100 + 0j

    def test_alternating(self) -> None:
        value = weyl_sum(PhaseVector((0.0, 0.5)), WeightSeq.ones(), 10).value
        assert abs(value) < 1e-12

    def test_complete_gauss_sum(self) -> None:
        """完全ガウス和 |sum e(n^2/7)| = sqrt(7)"""
        value = weyl_sum(PhaseVector((0.0, 1 / 7)), WeightSeq.ones(), 7).value
        assert abs(value) == pytest.approx(math.sqrt(7), abs=1e-12)

    def test_empty_sum(self) -> None:
        assert weyl_sum(PhaseVector((0.3,)), WeightSeq.ones(), 0).value == 0j

    @given(
        st.lists(st.floats(0.0, 1.0, exclude_max=True), min_size=1, max_size=4),
        st.integers(1, 300),
        st.integers(0, 2**32),
    )
    @settings(max_examples=40, deadline=None)
    def test_triangle_bound(self, coeffs: list[float], N: int, seed: int) -> None:
        """|S| <= N かつ prefix_max >= max(|S|, 1)"""
        phase = PhaseVector(tuple(coeffs))
        weights = WeightSeq.random(seed)
        total = weyl_sum(phase, weights, N)
        peak = prefix_max(phase, weights, N)
        assert total.magnitude <= N + 1e-9
        assert peak.value >= max(total.magnitude, 1.0) - 1e-9

    def test_weight_reduction_identity(self) -> None:
        """S_{a,d}(x; N) = sigma_{b,d}(x_d; N), b_n = a_n e(x_1 n + ... )"""
        x = PhaseVector((0.31, 0.77, 0.123))
        a = WeightSeq.random(7)
        b = WeightSeq.reduction(x.lower() or PhaseVector((0.0,)), base=a)
        full = weyl_sum(x, a, 200).value
        reduced = weyl_sum(MonomialPhase(x.leading, 3), b, 200).value
        assert abs(full - reduced) <= 1e-12 * 200

    def test_translation_covariance(self) -> None:
        """a_n を a_n e(alpha n^d) に替えると単項係数が alpha ずれる"""
        a = WeightSeq.random(11)
        alpha, x = 0.25, 0.375
        shifted = weyl_sum(MonomialPhase(x + alpha, 3), a, 150).value
        twisted = weyl_sum(MonomialPhase(x, 3), a.twisted(alpha, 3), 150).value
        assert abs(shifted - twisted) < 1e-10


class TestPrefixMax:
    def test_constant(self) -> None:
        peak = prefix_max(PhaseVector((0.0,)), WeightSeq.ones(), 50)
        assert (peak.value, peak.argmax) == (50.0, 50)

    def test_alternating_tie_break(self) -> None:
        """部分和 -1, 0, -1, ... の最大は最小の M = 1"""
        peak = prefix_max(PhaseVector((0.5,)), WeightSeq.ones(), 10)
        assert peak.value == pytest.approx(1.0)
        assert peak.argmax == 1

    def test_against_per_m_recomputation(self) -> None:
        phase = PhaseVector((0.0, 1 / 7))
        peak = prefix_max(phase, WeightSeq.ones(), 7)
        per_m = [weyl_sum(phase, WeightSeq.ones(), m).magnitude for m in range(1, 8)]
        assert peak.value == pytest.approx(max(per_m), abs=1e-12)
        assert peak.value >= math.sqrt(7) - 1e-12


class TestWeights:
    def test_unimodular_and_reproducible(self) -> None:
        a = weight_values(WeightSeq.random(123), 1000)
        assert np.allclose(np.abs(a), 1.0, atol=1e-12)
        assert np.array_equal(a, weight_values(WeightSeq.random(123), 1000))

    def test_random_access(self) -> None:
        """a_n は (seed, n) だけで決まる (取り出し開始位置に依らない)"""
        full = weight_values(WeightSeq.random(5), 100)
        tail = weight_values(WeightSeq.random(5), 37, start=58)
        assert np.array_equal(full[57:94], tail)

    def test_seed_required(self) -> None:
        with pytest.raises(LabValidationError):
            WeightSeq(mode=WeightSeq.random(1).mode)


class TestFlatSum:
    def test_xi_zero_rejected(self) -> None:
        with pytest.raises(LabValidationError):
            flat_sum_demo(0.0, 64)

    def test_resolution_too_coarse(self) -> None:
        with pytest.raises(LabValidationError):
            flat_sum_demo(0.7, 64, resolution=100)

    def test_bounded_ratio(self) -> None:
        """xi = 0.7, N = 256 で比は 5 以下"""
        result = flat_sum_demo(0.7, 256)
        assert result.resolution == 1024
        assert 0 < result.ratio <= 5
