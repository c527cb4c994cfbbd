from dataclasses import dataclass
from enum import Enum

import numpy as np


@dataclass(frozen=True)
class Spectrum:
    """周波数と係数の組 (sum_k beta_k e(z y_k))"""

    frequencies: np.ndarray  # 整数 (int64 / object) または float64
    coefficients: np.ndarray  # complex128

    @property
    def size(self) -> int:
        return int(self.frequencies.size)

    @property
    def is_integral(self) -> bool:
        return self.frequencies.dtype.kind in "iuO"


@dataclass(frozen=True)
class MomentResult:
    """区間上の |sum|^{2nu} の厳密積分 total = M + Re(E)"""

    total: float
    diagonal_M: float
    offdiag_E: complex
    nu: int
    N: int
    delta: float
    distinct: int  # 縮約後の周波数の個数 K'
    ratio: float | None = None  # 正規化した値 (呼び出し側の主要項で割ったもの)


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    stderr: float
    samples: int
    seed: int


@dataclass(frozen=True)
class VarianceResult:
    """分散積分の推定値"""

    value: float
    stderr: float
    eps0: float
    eps1: float
    N: int
    M: int
    samples: int
    reference: float  # N^{-2γ+3} (ε1 + N^{-γ+2})


class SumRange(Enum):
    """和をとる n の範囲"""

    INITIAL = "initial"  # 1..N
    DYADIC = "dyadic"  # N..2N

    def bounds(self, N: int) -> tuple[int, int]:
        """(最初の n, 項数)"""
        if self is SumRange.INITIAL:
            return 1, N
        return N, N + 1
