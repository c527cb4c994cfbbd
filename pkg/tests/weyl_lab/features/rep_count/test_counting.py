import itertools
import math

import numpy as np
import pytest

from weyl_lab.core.domain.interval import Interval
from weyl_lab.core.errors import BudgetExceededError, LabValidationError
from weyl_lab.features.moment_lab.application.moments import fourth_moment_interval
from weyl_lab.features.rep_count.application.counting import (
    diagonal_count,
    full_nondiag_profile,
    nondiag_profile,
    power_pair_count,
    q_count,
    quartic_shift_count,
    r_count,
    sample_shifts,
    shift_distribution,
)
from weyl_lab.features.rep_count.application.spectrum import build_pair_spectrum
from weyl_lab.features.rep_count.domain.models import PairSystemQuery, RepQuery
from weyl_lab.features.weyl_core.domain.models import WeightSeq


def brute_force(d: int, k: int, N: int) -> int:
    """n1^d + n2^d - n3^d - n4^d = k の総当たり"""
    powers = np.arange(1, N + 1, dtype=np.int64) ** d
    pair = np.add.outer(powers, powers).ravel()
    return int(np.sum(np.subtract.outer(pair, pair) == k))


def brute_force_pair_system(k: int, m: int, N: int) -> int:
    r = range(1, N + 1)
    return sum(
        1
        for a, b, c, e in itertools.product(r, repeat=4)
        if a + b - c - e == k and a * a + b * b - c * c - e * e == m
    )


class TestRCount:
    def test_single_quadruple(self) -> None:
        result = r_count(RepQuery(3, 0, 1))
        assert (result.total, result.diagonal) == (1, 1)

    def test_taxicab(self) -> None:
        result = r_count(RepQuery(3, 0, 12))
        assert result.total == 284
        assert result.diagonal == 2 * 144 - 12
        assert result.nondiagonal == 8

    def test_shift_seven(self) -> None:
        result = r_count(RepQuery(3, 7, 10))
        assert result.total == brute_force(3, 7, 10)
        assert result.total > 0
        assert result.diagonal == 0

    def test_matches_brute_force_on_random_shifts(self) -> None:
        N = 40
        rng = np.random.default_rng(0)
        spec = build_pair_spectrum(3, N)
        ks = [0, *(int(k) for k in rng.integers(-(2 * N**3), 2 * N**3, size=10))]
        ks += [int(s - t) for s, t in zip(spec.values[:5], spec.values[-5:], strict=True)]
        for k in ks:
            assert r_count(RepQuery(3, k, N), spec).total == brute_force(3, k, N)

    def test_symmetry(self) -> None:
        for k in (1, 7, 19, 37, 1729):
            assert r_count(RepQuery(3, k, 30)).total == r_count(RepQuery(3, -k, 30)).total

    @pytest.mark.parametrize(("d", "N"), [(2, 15), (3, 20), (5, 12)])
    def test_zero_shift_dominates_diagonal(self, d: int, N: int) -> None:
        assert r_count(RepQuery(d, 0, N)).total >= diagonal_count(N)

    def test_out_of_range_shift(self) -> None:
        assert r_count(RepQuery(3, 4 * 10**3 + 1, 10)).total == 0

    def test_beyond_int64_uses_wide_integers(self) -> None:
        """2N^d >= 2^62 でもペア和の対角を正しく数える"""
        N = 20
        assert r_count(RepQuery(15, 0, N)).total == diagonal_count(N)

    def test_rejects_linear(self) -> None:
        with pytest.raises(LabValidationError):
            RepQuery(1, 0, 10)

    def test_budget(self) -> None:
        with pytest.raises(BudgetExceededError):
            r_count(RepQuery(3, 0, 100), spectrum_budget=100)

    def test_agrees_with_full_period_fourth_moment(self) -> None:
        moment = fourth_moment_interval(3, WeightSeq.ones(), Interval.full(), 25)
        assert moment.total == pytest.approx(r_count(RepQuery(3, 0, 25)).total, abs=1e-6)


@pytest.mark.parametrize(("N", "expected"), [(1, 1), (2, 6), (1000, 1_999_000)])
def test_diagonal_count(N: int, expected: int) -> None:
    assert diagonal_count(N) == expected


class TestQCount:
    def test_zero_shift(self) -> None:
        result = q_count(PairSystemQuery(0, 0, 40))
        assert result.total == 3160
        assert result.nondiagonal == 0

    def test_small_brute_force(self) -> None:
        assert q_count(PairSystemQuery(1, 1, 2)).total == 0
        for k, m in [(1, 3), (0, 0), (2, 8), (-1, -5)]:
            assert q_count(PairSystemQuery(k, m, 6)).total == brute_force_pair_system(k, m, 6)

    def test_large_zero_shift(self) -> None:
        N = 500
        assert abs(q_count(PairSystemQuery(0, 0, N)).total - 2 * N * N) <= N


class TestPowerPairs:
    def test_cube_difference(self) -> None:
        result = power_pair_count(3, 7, 10)
        assert result.count == 1
        assert result.pairs == ((2, 1),)

    def test_negative_shift_swaps(self) -> None:
        assert power_pair_count(3, -7, 10).pairs == ((1, 2),)

    def test_out_of_range(self) -> None:
        assert power_pair_count(3, 999_999, 10).count == 0

    def test_zero_rejected(self) -> None:
        with pytest.raises(LabValidationError):
            power_pair_count(2, 0, 10)

    @pytest.mark.parametrize(("d", "k"), [(2, 15), (2, 24), (3, 91), (4, 65)])
    def test_matches_scan(self, d: int, k: int) -> None:
        N = 30
        scan = sorted(
            (m, n) for m in range(1, N + 1) for n in range(1, N + 1) if m**d == n**d + k
        )
        assert list(power_pair_count(d, k, N).pairs) == scan


class TestProfile:
    def test_quintic_exponent(self) -> None:
        N = 200
        shifts = sample_shifts(5, N, 32, seed=1)
        profile = nondiag_profile(5, N, shifts)
        assert len(profile.counts) == len(shifts)
        assert profile.exponent is None or profile.exponent <= 1 + 2 / math.sqrt(5) + 0.3

    def test_cubic_exponent_near_taxicab(self) -> None:
        N = 500
        extra = [1729 + j for j in range(-3, 4)]
        shifts = sample_shifts(3, N, 16, seed=2, extra=extra)
        profile = nondiag_profile(3, N, shifts, workers=2)
        assert set(extra) <= set(profile.shifts)
        assert profile.exponent is not None
        assert profile.exponent <= 11 / 6 + 0.3

    def test_out_of_range_shift_is_zero(self) -> None:
        N = 10
        profile = nondiag_profile(3, N, [4 * N**3 + 5])
        assert profile.counts == (0,)
        assert profile.exponent is None

    def test_zero_shift_rejected(self) -> None:
        with pytest.raises(LabValidationError):
            nondiag_profile(3, 10, [0, 1])

    def test_sampled_shifts_are_realised(self) -> None:
        N = 30
        spec = build_pair_spectrum(4, N)
        for k in sample_shifts(4, N, 12, seed=5):
            assert k != 0
            assert r_count(RepQuery(4, k, N), spec).total > 0


class TestQuarticShift:
    def test_zero_shift_matches_r4(self) -> None:
        assert quartic_shift_count(0, 50) == r_count(RepQuery(4, 0, 50)).total

    @pytest.mark.parametrize("k", [15, 65, 2, 17, -80])
    def test_matches_brute_force(self, k: int) -> None:
        N = 10
        assert quartic_shift_count(k, N) == brute_force(4, k, N)
        assert quartic_shift_count(k, N) == r_count(RepQuery(4, k, N)).total

    def test_fifteen_has_solutions(self) -> None:
        assert quartic_shift_count(15, 10) >= 10


def test_shift_distribution_sums_to_all_quadruples() -> None:
    N = 12
    shifts, counts = shift_distribution(3, N)
    assert int(counts.sum()) == N**4
    assert int(counts[np.searchsorted(shifts, 0)]) == 284


def test_full_profile_agrees_with_direct_counts() -> None:
    N = 12
    profile = full_nondiag_profile(3, N)
    assert 0 not in profile.shifts
    assert sum(profile.counts) == N**4 - 284
    assert profile.max_count == max(profile.counts)
    for k, count in list(zip(profile.shifts, profile.counts, strict=True))[::97]:
        assert count == r_count(RepQuery(3, k, N)).total
    assert profile.argmax_shift is not None
    assert r_count(RepQuery(3, profile.argmax_shift, N)).total == profile.max_count
