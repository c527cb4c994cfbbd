from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weyl_lab.core.errors import PhaseRangeError
from weyl_lab.features.weyl_core.application.phase_arith import (
    frac_mul,
    polynomial_phases,
    power_limbs,
)


def _exact_frac(x: float, m: int) -> float:
    """Fraction による厳密な frac(x m)"""
    value = Fraction(x) * m
    return float(value - (value.numerator // value.denominator))


def _circle_distance(a: float, b: float) -> float:
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


class TestFracMul:
    @given(
        st.floats(min_value=0.0, max_value=1.0, exclude_max=True),
        st.integers(min_value=-(2**62), max_value=2**62),
    )
    @settings(max_examples=200)
    def test_matches_fraction_arithmetic(self, x: float, m: int) -> None:
        """int64 範囲の整数で Fraction の厳密値と一致する"""
        got = float(frac_mul(x, np.array([m], dtype=np.int64))[0])
        assert 0.0 <= got < 1.0
        assert _circle_distance(got, _exact_frac(x, m)) < 1e-12

    def test_beyond_int64(self) -> None:
        """n^5 (n = 10^4) のような 2^63 超の整数でも正しく簡約する"""
        m = 10_000**5
        x = 0.123456789
        got = float(frac_mul(x, np.array([m], dtype=object))[0])
        assert _circle_distance(got, _exact_frac(x, m)) < 1e-9

    def test_refuses_beyond_limbs(self) -> None:
        with pytest.raises(PhaseRangeError):
            frac_mul(0.5, np.array([2**110], dtype=object))

    @pytest.mark.parametrize("m", [2**104 - 1, -(2**104) + 1])
    def test_largest_exact_multiplier(self, m: int) -> None:
        x = 0.7071067811865476
        got = float(frac_mul(x, np.array([m], dtype=object))[0])
        assert 0.0 <= got < 1.0
        assert _circle_distance(got, _exact_frac(x, m)) < 1e-9

    @pytest.mark.parametrize("m", [2**104, -(2**104)])
    def test_refuses_at_limb_capacity(self, m: int) -> None:
        with pytest.raises(PhaseRangeError):
            frac_mul(0.5, np.array([m], dtype=object))

    def test_zero_multiplier(self) -> None:
        assert frac_mul(0.7, np.array([0]))[0] == 0.0


class TestPowerLimbs:
    def test_overflow_is_rejected(self) -> None:
        """n^d が 2^104 を超える場合は範囲エラー"""
        with pytest.raises(PhaseRangeError):
            power_limbs(np.array([2**25]), 5)

    def test_largest_base_fits_fourth_power(self) -> None:
        """(2^26 - 1)^4 < 2^104 は通り、5 乗は拒否される"""
        top = power_limbs(np.array([2**26 - 1]), 4)[-1]
        assert sum(int(top[k][0]) << (26 * k) for k in range(4)) == (2**26 - 1) ** 4
        with pytest.raises(PhaseRangeError):
            power_limbs(np.array([2**26 - 1]), 5)

    def test_base_range(self) -> None:
        with pytest.raises(PhaseRangeError):
            power_limbs(np.array([2**26]), 1)


def test_polynomial_phases_against_fraction() -> None:
    """係数行列の多項式位相が Fraction の厳密計算と一致する"""
    coeffs = np.array([[0.1, 0.2, 0.3], [0.0, 0.5, 0.999]])
    n = np.array([1, 7, 1000, 65_536])
    got = polynomial_phases(coeffs, n)
    for g, row in enumerate(coeffs):
        for col, nv in enumerate(n):
            exact = sum(Fraction(c) * int(nv) ** (i + 1) for i, c in enumerate(row))
            exact_frac = float(exact - (exact.numerator // exact.denominator))
            assert _circle_distance(got[g, col], exact_frac) < 1e-12
