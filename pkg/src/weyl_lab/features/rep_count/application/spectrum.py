"""
d 乗のペア和スペクトル P(s) = #{(n1, n2) in [1,N]^2 : n1^d + n2^d = s}。

値の昇順配列と重複度の組で持ち、シフト k との結合は二分探索で行う。
"""

from dataclasses import dataclass

import numpy as np

from weyl_lab.core.domain.lab_config import resolve_spectrum_budget
from weyl_lab.core.errors import LabValidationError
from weyl_lab.core.services.budget import check_budget

INT64_LIMIT = 1 << 62
WIDE_LIMIT = 1 << 127


@dataclass(frozen=True)
class PairSpectrum:
    values: np.ndarray  # 昇順 (int64 または object)
    counts: np.ndarray  # int64

    @property
    def size(self) -> int:
        return int(self.values.size)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def shift_join(self, k: int) -> int:
        """sum_s P(s) P(s - k)"""
        target = self.values - k
        pos = np.searchsorted(self.values, target)
        inside = pos < self.size
        hit = np.zeros(self.size, dtype=bool)
        hit[inside] = self.values[pos[inside]] == target[inside]
        return int(np.dot(self.counts[hit], self.counts[pos[hit]]))


def power_values(d: int, N: int) -> np.ndarray:
    """1^d, ..., N^d (2N^d が int64 に収まらなければ Python int)"""
    if 2 * N**d >= WIDE_LIMIT:
        msg = f"2N^d = 2*{N}^{d} exceeds 2^127"
        raise LabValidationError(msg)
    if 2 * N**d < INT64_LIMIT:
        return np.arange(1, N + 1, dtype=np.int64) ** d
    return np.array([n**d for n in range(1, N + 1)], dtype=object)


def _collapse(values: np.ndarray, weights: np.ndarray | None = None) -> PairSpectrum:
    if weights is None:
        uniq, counts = np.unique(values, return_counts=True)
        return PairSpectrum(uniq, counts.astype(np.int64))
    uniq, inverse = np.unique(values, return_inverse=True)
    summed = np.bincount(inverse.ravel(), weights=weights, minlength=uniq.size)
    return PairSpectrum(uniq, np.rint(summed).astype(np.int64))


def build_pair_spectrum(d: int, N: int, spectrum_budget: int | None = None) -> PairSpectrum:
    """n1 <= n2 の和を作り、順序対の重複度 2c - [s = 2n^d] に直す"""
    check_budget("pair spectrum", N * (N + 1) // 2, resolve_spectrum_budget(spectrum_budget))
    p = power_values(d, N)
    unordered = np.concatenate([p[i] + p[i:] for i in range(N)])
    spec = _collapse(unordered)

    counts = 2 * spec.counts
    # 2n^d は n ごとに異なる
    counts[np.searchsorted(spec.values, 2 * p)] -= 1
    return PairSpectrum(spec.values, counts)


def build_difference_spectrum(
    d: int, N: int, spectrum_budget: int | None = None
) -> PairSpectrum:
    """D(t) = #{(x1, x2) : x1^d - x2^d = t}"""
    check_budget("difference spectrum", N * N, resolve_spectrum_budget(spectrum_budget))
    p = power_values(d, N)
    return _collapse(np.subtract.outer(p, p).ravel())


def build_quadratic_spectrum(
    N: int, spectrum_budget: int | None = None
) -> tuple[PairSpectrum, int]:
    """
    (n1 + n2, n1^2 + n2^2) の順序対重複度を、キー u * B + v (B = 2N^2 + 1) で持つ。
    """
    check_budget("pair spectrum", N * (N + 1) // 2, resolve_spectrum_budget(spectrum_budget))
    n = np.arange(1, N + 1, dtype=np.int64)
    base = 2 * N * N + 1
    i, j = np.triu_indices(N)
    keys = (n[i] + n[j]) * base + n[i] ** 2 + n[j] ** 2
    return _collapse(keys, np.where(i == j, 1.0, 2.0)), base
