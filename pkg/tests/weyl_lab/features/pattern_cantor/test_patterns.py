import math

import numpy as np
import pytest

from weyl_lab.core.domain.interval import Interval
from weyl_lab.core.errors import LabValidationError
from weyl_lab.features.pattern_cantor.application.patterns import (
    endpoint_stability,
    large_value_intervals,
    pattern_validate,
    power_profile,
    select_separated,
)
from weyl_lab.features.pattern_cantor.domain.models import Clause, GrowthSpec, Pattern
from weyl_lab.features.weyl_core.application.batch import batch_eval
from weyl_lab.features.weyl_core.domain.models import MonomialPhase, WeightSeq

DELTA = 0.05
CELLS = (0, 1, 3, 4, 6, 7)


def eight_six_pattern(members: list[Interval] | None = None) -> Pattern:
    """[0,1) を 8 分割し、6 個のセルに長さ 0.05 の区間を置いた構成"""
    if members is None:
        members = [Interval(c / 8 + 0.03, DELTA) for c in CELLS]
    return Pattern(Interval.full(), 8, DELTA, tuple(members))


class TestPatternValidate:
    def test_accepts_eight_six(self) -> None:
        report = pattern_validate(eight_six_pattern())
        assert report.valid
        assert eight_six_pattern().M == 6

    def test_member_too_long(self) -> None:
        members = list(eight_six_pattern().members)
        members[0] = Interval(0.01, 2 * DELTA)
        report = pattern_validate(eight_six_pattern(members))
        assert report.clauses() == {Clause.LENGTH}

    def test_two_members_in_one_cell(self) -> None:
        members = list(eight_six_pattern().members)
        members[0] = Interval(0.01, DELTA)
        members[1] = Interval(0.07, DELTA)
        report = pattern_validate(eight_six_pattern(members))
        assert report.clauses() == {Clause.SHARED_CELL}

    def test_member_crosses_cell_boundary(self) -> None:
        members = list(eight_six_pattern().members)
        members[2] = Interval(0.36, DELTA)  # セル 2 から 3 へはみ出す
        report = pattern_validate(eight_six_pattern(members))
        assert report.clauses() == {Clause.CONTAINMENT}

    def test_empty_pattern(self) -> None:
        report = pattern_validate(eight_six_pattern([]))
        assert not report.valid
        assert report.clauses() == {Clause.EMPTY}

    def test_member_outside_parent(self) -> None:
        members = list(eight_six_pattern().members)
        members[-1] = Interval(0.98, DELTA)
        assert Clause.CONTAINMENT in pattern_validate(eight_six_pattern(members)).clauses()


class TestSelectSeparated:
    def test_uniform_profile(self) -> None:
        selections = select_separated(np.ones_like, Interval.full(), 0.1, 0.5)
        assert len(selections) == 10
        centers = [s.center for s in selections]
        assert np.all(np.diff(centers) >= 0.1 - 1e-12)
        assert all(s.witness.length == pytest.approx(0.1) for s in selections)

    def test_threshold_above_max(self) -> None:
        assert select_separated(np.ones_like, Interval.full(), 0.1, 1.5) == []

    def test_rejects_non_positive_spacing(self) -> None:
        with pytest.raises(LabValidationError):
            select_separated(np.ones_like, Interval.full(), 0.0, 0.5)

    def test_selects_only_qualifying_points(self) -> None:
        selections = select_separated(
            lambda xs: np.where(xs > 0.5, 2.0, 0.0), Interval.full(), 0.05, 1.0
        )
        assert selections
        assert min(s.center for s in selections) > 0.5

    def test_cubic_sum_near_zero(self) -> None:
        """|σ_3(x; 256)| は x ≈ 0 で 256 に近いので少なくとも1つ選ばれる"""
        N = 256

        def profile(xs: np.ndarray) -> np.ndarray:
            grid = [MonomialPhase(float(x), 3) for x in xs]
            return np.abs([v.value for v in batch_eval(grid, WeightSeq.ones(), N)])

        spacing = float(N) ** (-3 + 0.5 + 0.1)
        selections = select_separated(profile, Interval(0.0, 0.01), spacing, 0.8 * math.sqrt(N))
        assert len(selections) >= 1


class TestLargeValueIntervals:
    @pytest.fixture(scope="class")
    def growth(self) -> GrowthSpec:
        return GrowthSpec(gamma=3.0, tau=0.1)

    @pytest.fixture(scope="class")
    def pattern(self, growth: GrowthSpec) -> Pattern:
        return large_value_intervals(growth, WeightSeq.ones(), Interval(0.2, 0.05), 256)

    def test_pattern_is_valid(self, pattern: Pattern) -> None:
        assert pattern.M > 0
        assert pattern_validate(pattern).valid

    def test_pattern_parameters(self, pattern: Pattern) -> None:
        assert pattern.delta == pytest.approx(256 ** (-3.1))
        assert pattern.N == math.ceil(256**2.4 * 0.05) + 1

    def test_centres_clear_threshold(self, pattern: Pattern) -> None:
        assert min(pattern.values) >= 0.25 * 16

    def test_members_contain_selected_points(self, pattern: Pattern) -> None:
        for member, witness in zip(pattern.members, pattern.witnesses, strict=True):
            assert member.start <= witness.center <= member.end

    def test_centres_recomputed(self, growth: GrowthSpec, pattern: Pattern) -> None:
        centers = np.array([w.center for w in pattern.witnesses[:20]])
        values = power_profile(growth.gamma, WeightSeq.ones(), 256)(centers)
        np.testing.assert_allclose(values, pattern.values[:20], rtol=1e-9)

    def test_endpoint_stability_reported(self, growth: GrowthSpec, pattern: Pattern) -> None:
        report = endpoint_stability([pattern], growth.gamma, WeightSeq.ones(), 256)
        assert report.min_center_ratio >= 1.0
        assert report.min_endpoint_ratio > 0

    def test_unreachable_threshold(self, growth: GrowthSpec) -> None:
        pattern = large_value_intervals(
            growth, WeightSeq.ones(), Interval(0.2, 0.05), 256, c0=10.0
        )
        assert pattern.M == 0
        assert pattern_validate(pattern).clauses() == {Clause.EMPTY}

    def test_rejects_short_interval(self, growth: GrowthSpec) -> None:
        with pytest.raises(LabValidationError):
            large_value_intervals(growth, WeightSeq.ones(), Interval(0.2, 0.001), 256)


class TestGrowthSpec:
    @pytest.mark.parametrize(
        ("gamma", "tau"), [(1.0, 0.1), (3.0, 0.0), (3.0, 0.5), (2.5, 0.3)]
    )
    def test_guards(self, gamma: float, tau: float) -> None:
        with pytest.raises(LabValidationError):
            GrowthSpec(gamma=gamma, tau=tau)

    def test_gamma_between_one_and_two(self) -> None:
        assert GrowthSpec(gamma=1.5, tau=0.2).separation_exponent == pytest.approx(-0.8)
