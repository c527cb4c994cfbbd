import math

import numpy as np
import pytest

from weyl_lab.core.domain.interval import Box, Interval
from weyl_lab.core.errors import LabValidationError
from weyl_lab.features.measure_scan.application.counterexample import (
    bracket_generation,
    counterexample_A,
    series_bound,
    union_measure,
)
from weyl_lab.features.measure_scan.application.scan import (
    epsilon0,
    indicator_fraction,
    ladder_stats,
    moment_prediction,
    sample_grid,
)
from weyl_lab.features.measure_scan.domain.models import SERIES_LIMIT, ScanThresholds, SumKind
from weyl_lab.features.weyl_core.domain.models import WeightSeq

CUBIC = SumKind(3)
LADDER = [2**k for k in range(8, 14)]


class TestEpsilon0:
    def test_arithmetic(self) -> None:
        t = ScanThresholds(c=0.5, C=math.sqrt(8), alpha1=1.0, alpha2=2.0)
        assert epsilon0(t) == pytest.approx(0.0625)

    def test_quartic_choice(self) -> None:
        """c = 0, C^2 = 4 / (1 - c^2) なら ε0 = (1 - c^2)^2 / 8"""
        t = ScanThresholds(c=0.0, C=2.0, alpha1=1.0, alpha2=2.0)
        assert epsilon0(t) == pytest.approx(1 / 8)

    def test_non_positive_reported(self) -> None:
        assert epsilon0(ScanThresholds(c=0.1, C=1.0, alpha1=1.0, alpha2=3.0)) <= 0

    @pytest.mark.parametrize(("c", "C"), [(-0.1, 1.0), (2.0, 2.0), (1.0, 0.5)])
    def test_rejects(self, c: float, C: float) -> None:
        with pytest.raises(LabValidationError):
            ScanThresholds(c, C)


class TestSampleGrid:
    def test_interval(self) -> None:
        points = sample_grid(Interval(0.2, 0.1), 1000, seed=3)
        assert points.shape == (1000, 1)
        assert np.all((points >= 0.2) & (points < 0.3))
        assert np.allclose(np.diff(points[:, 0]), 1e-4)

    def test_seeded(self) -> None:
        a = sample_grid(Interval.full(), 1000, seed=5)
        b = sample_grid(Interval.full(), 1000, seed=5)
        c = sample_grid(Interval.full(), 1000, seed=6)
        np.testing.assert_array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_box(self) -> None:
        points = sample_grid(Box.cube(Interval.full(), 2), 1024)
        assert points.shape == (1024, 2)
        assert np.all((points >= 0) & (points < 1))


class TestIndicatorFraction:
    def test_trivial_shell(self) -> None:
        N = 1000
        fraction = indicator_fraction(
            CUBIC, WeightSeq.random(1), Interval.full(), N, 0.0, math.sqrt(N), grid=1000
        )
        assert fraction == 1.0

    def test_mid_range_dominates(self) -> None:
        fraction = indicator_fraction(CUBIC, WeightSeq.ones(), Interval.full(), 4096, 0.25, 4.0)
        assert fraction >= 0.5

    def test_thin_shell(self) -> None:
        fraction = indicator_fraction(CUBIC, WeightSeq.ones(), Interval.full(), 1024, 2.0, 2.0001)
        assert fraction < 0.05

    def test_widening_is_monotone(self) -> None:
        shells = [(0.5, 2.0), (0.3, 3.0), (0.1, 5.0), (0.0, 32.0)]
        fractions = [
            indicator_fraction(CUBIC, WeightSeq.ones(), Interval(0.1, 0.3), 1024, c, C, grid=1000)
            for c, C in shells
        ]
        assert fractions == sorted(fractions)

    def test_full_sum_on_box(self) -> None:
        N = 200
        region = Box.cube(Interval.full(), 2)
        fraction = indicator_fraction(
            SumKind(2, full=True), WeightSeq.ones(), region, N, 0.0, math.sqrt(N), grid=1024
        )
        assert fraction == 1.0

    def test_rejects_small_grid(self) -> None:
        with pytest.raises(LabValidationError):
            indicator_fraction(CUBIC, WeightSeq.ones(), Interval.full(), 100, 0.1, 2.0, grid=999)

    def test_rejects_dimension_mismatch(self) -> None:
        with pytest.raises(LabValidationError):
            indicator_fraction(
                SumKind(3, full=True), WeightSeq.ones(), Interval.full(), 100, 0.1, 2.0
            )


class TestLadderStats:
    def test_singleton_matches_indicator(self) -> None:
        report = ladder_stats(CUBIC, WeightSeq.ones(), Interval.full(), [512], 0.3, 4.0, grid=1000)
        fraction = indicator_fraction(
            CUBIC, WeightSeq.ones(), Interval.full(), 512, 0.3, 4.0, grid=1000
        )
        assert report.union_fraction == fraction

    def test_dyadic_ladder_union(self) -> None:
        report = ladder_stats(CUBIC, WeightSeq.ones(), Interval.full(), LADDER, 0.3, 4.0, grid=2048)
        assert report.union_fraction >= 0.9
        assert report.hits.shape == (2048, len(LADDER))
        assert all(0 <= f <= 1 for f in report.tail_fractions)
        assert list(report.tail_fractions) == sorted(report.tail_fractions, reverse=True)
        assert report.union_fraction >= max(report.level_fractions)

    def test_deterministic(self) -> None:
        def run(workers: int) -> np.ndarray:
            report = ladder_stats(
                CUBIC,
                WeightSeq.random(7),
                Interval(0.2, 0.5),
                [256, 512],
                0.3,
                4.0,
                grid=1000,
                seed=11,
                workers=workers,
            )
            return report.hits

        np.testing.assert_array_equal(run(1), run(1))
        np.testing.assert_array_equal(run(1), run(3))

    def test_predicted_fraction(self) -> None:
        report = ladder_stats(
            CUBIC, WeightSeq.ones(), Interval.full(), [256], 0.0, 2.0, grid=1000, alphas=(1.0, 2.0)
        )
        assert report.predicted == pytest.approx(1 / 8)

    @pytest.mark.parametrize("ladder", [[], [512, 256], [256, 256], [0, 8]])
    def test_rejects_bad_ladder(self, ladder: list[int]) -> None:
        with pytest.raises(LabValidationError):
            ladder_stats(CUBIC, WeightSeq.ones(), Interval.full(), ladder, 0.3, 4.0, grid=1000)


class TestMomentPrediction:
    def test_lower_bound_holds(self) -> None:
        result = moment_prediction(3, WeightSeq.ones(), Interval(0.3, 0.2), 60, 0.25, 2.0, 2000)
        assert result.alpha1 > 0
        assert result.alpha2 > 0
        assert result.fraction >= result.epsilon0 - 0.05


class TestCounterexampleA:
    def test_measure_bound(self) -> None:
        result = counterexample_A(1000, Interval.full())
        assert result.measure_bound == pytest.approx(SERIES_LIMIT, abs=1e-3)
        assert SERIES_LIMIT == pytest.approx(0.36551, abs=1e-5)

    def test_full_probe_density_is_measure(self) -> None:
        result = counterexample_A(100, Interval.full())
        assert result.density == result.measure_estimate
        assert 0 < result.measure_estimate <= result.measure_bound

    def test_series_bound_decreases_to_limit(self) -> None:
        assert series_bound(10) > series_bound(100) > series_bound(1000) > SERIES_LIMIT

    def test_bracket(self) -> None:
        delta = 3.0**-8 * 8**3
        assert bracket_generation(delta) == 8
        assert bracket_generation(0.999) == 4
        assert bracket_generation(1.5) is None

    def test_local_density(self) -> None:
        delta = 3.0**-8 * 8**3
        result = counterexample_A(100, Interval(0.4, delta))
        assert result.bracket == 8
        assert 0 < result.density <= result.density_upper <= 1
        assert result.scaled_density >= 0.1

    def test_union_of_first_generation(self) -> None:
        """世代1: 中心 0, 1/3, 2/3, 1 の半径 1/27 の区間 (両端は半分だけ T に入る)"""
        assert union_measure(Interval.full(), 1) == pytest.approx(6 / 27)

    def test_rejects(self) -> None:
        with pytest.raises(LabValidationError):
            counterexample_A(1, Interval.full())
