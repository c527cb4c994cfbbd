"""
格子上の多数の位相点に対する一括評価。

多項式位相 P(n) は d 階差分が定数なので、状態 e(Δ^k P(n)) (k = 0..d) を
e(Δ^k P(n+1)) = e(Δ^k P(n)) e(Δ^{k+1} P(n)) で進めれば1項あたり d 回の複素乗算で済む。
各ブロック (anchor_interval 項) の先頭で状態を厳密位相から張り直すため、誤差は
ブロック長ぶんしか蓄積しない。ブロックは全て同時に進める。
"""

from collections.abc import Sequence
from math import comb

import numpy as np

from weyl_lab.core.constants import DEFAULT_ANCHOR_INTERVAL
from weyl_lab.core.errors import LabValidationError
from weyl_lab.core.services.parallel import partitioned_map
from weyl_lab.features.weyl_core.application.evaluator import (
    coefficient_row,
    float_phases,
)
from weyl_lab.features.weyl_core.application.phase_arith import polynomial_phases
from weyl_lab.features.weyl_core.application.weights import TWO_PI, weight_values
from weyl_lab.features.weyl_core.domain.models import GeneralPhase, Phase, SumValue, WeightSeq

# 1回に展開する (格子点 x 項) の上限
BLOCK_ELEMENTS = 1 << 22
# 部分和を進める窓の長さ (格子の分割に依らず一定)
WINDOW_TERMS = 4096
MAX_ROWS = BLOCK_ELEMENTS // WINDOW_TERMS


def _difference_terms(
    coeffs: np.ndarray, start: int, count: int, anchor_interval: int
) -> np.ndarray:
    """e(P_g(n)) を [G, count] で返す (差分表 + ブロック毎の厳密な張り直し)"""
    G, D = coeffs.shape
    B = max(1, anchor_interval)
    n_blocks = -(-count // B)
    anchors = start + B * np.arange(n_blocks, dtype=np.int64)

    # 各アンカー a に対して P(a), P(a+1), ..., P(a+D) の厳密位相
    offsets = np.arange(D + 1, dtype=np.int64)
    points = (anchors[:, None] + offsets[None, :]).ravel()
    values = polynomial_phases(coeffs, points).reshape(G, n_blocks, D + 1)

    # Δ^k P(a) = sum_j (-1)^{k-j} C(k,j) P(a+j)  (mod 1)
    states = np.empty((D + 1, G, n_blocks), dtype=np.complex128)
    for k in range(D + 1):
        diff = np.zeros((G, n_blocks), dtype=np.float64)
        for j in range(k + 1):
            diff += (-1) ** (k - j) * comb(k, j) * values[:, :, j]
        states[k] = np.exp(TWO_PI * 1j * np.mod(diff, 1.0))

    out = np.empty((G, n_blocks, B), dtype=np.complex128)
    for t in range(B):
        out[:, :, t] = states[0]
        for k in range(D):
            states[k] *= states[k + 1]
    return out.reshape(G, n_blocks * B)[:, :count]


def _float_terms(phases: Sequence[GeneralPhase], start: int, count: int) -> np.ndarray:
    n = np.arange(start, start + count, dtype=np.int64)
    rows = [float_phases(p, n) for p in phases]
    return np.exp(TWO_PI * 1j * np.array(rows))


def grid_terms(
    grid: Sequence[Phase], start: int, count: int, anchor_interval: int = DEFAULT_ANCHOR_INTERVAL
) -> np.ndarray:
    """e(phase_g(n)) を [G, count] で返す (重みなし)"""
    out = np.empty((len(grid), count), dtype=np.complex128)
    rows = [coefficient_row(p) for p in grid]
    poly_idx = [i for i, r in enumerate(rows) if r is not None]
    other_idx = [i for i, r in enumerate(rows) if r is None]

    if poly_idx:
        width = max(len(rows[i] or ()) for i in poly_idx)
        coeffs = np.zeros((len(poly_idx), width), dtype=np.float64)
        for slot, i in enumerate(poly_idx):
            row = rows[i] or ()
            coeffs[slot, : len(row)] = row
        out[poly_idx] = _difference_terms(coeffs, start, count, anchor_interval)
    if other_idx:
        phases = [grid[i] for i in other_idx]
        out[other_idx] = _float_terms(phases, start, count)  # type: ignore[arg-type]
    return out


def _scan(
    grid: Sequence[Phase],
    weights: WeightSeq,
    n_start: int,
    n_end: int,
    checkpoints: np.ndarray,
    anchor_interval: int,
) -> tuple[np.ndarray, np.ndarray]:
    """
    部分和 sum_{n_start<=n<=M} を checkpoints の各 M で、および区間内の最大絶対値を返す。
    """
    G = len(grid)
    sums = np.zeros((G, checkpoints.size), dtype=np.complex128)
    peak = np.zeros(G, dtype=np.float64)
    running = np.zeros(G, dtype=np.complex128)
    window = WINDOW_TERMS

    for w0 in range(n_start, n_end + 1, window):
        count = min(window, n_end - w0 + 1)
        terms = grid_terms(grid, w0, count, anchor_interval)
        terms *= weight_values(weights, count, w0)[None, :]
        partial = np.cumsum(terms, axis=1) + running[:, None]
        peak = np.maximum(peak, np.abs(partial).max(axis=1))

        inside = (checkpoints >= w0) & (checkpoints < w0 + count)
        if inside.any():
            sums[:, inside] = partial[:, checkpoints[inside] - w0]
        running = partial[:, -1].copy()
    return sums, peak


def _validate_grid(N: int) -> None:
    if N < 0:
        msg = f"N must be non-negative, got {N}"
        raise LabValidationError(msg)


def batch_eval(
    grid: Sequence[Phase],
    weights: WeightSeq,
    N: int,
    anchor_interval: int = DEFAULT_ANCHOR_INTERVAL,
    workers: int = 1,
) -> list[SumValue]:
    """各格子点の Weyl 和 (weyl_sum と 1e-9 相対で一致)"""
    _validate_grid(N)
    if not grid or N == 0:
        return [SumValue(0j, N) for _ in grid]

    def run(block: Sequence[Phase]) -> list[SumValue]:
        values: list[SumValue] = []
        for i in range(0, len(block), MAX_ROWS):
            rows = block[i : i + MAX_ROWS]
            sums, _ = _scan(rows, weights, 1, N, np.array([N]), anchor_interval)
            values.extend(SumValue(complex(v), N) for v in sums[:, 0])
        return values

    return partitioned_map(run, list(grid), workers)


def batch_partial_sums(
    grid: Sequence[Phase],
    weights: WeightSeq,
    checkpoints: Sequence[int],
    anchor_interval: int = DEFAULT_ANCHOR_INTERVAL,
    workers: int = 1,
) -> np.ndarray:
    """部分和 S(M) を [G, len(checkpoints)] で返す (ラダー用)"""
    marks = np.asarray(checkpoints, dtype=np.int64)
    if marks.size == 0 or not grid:
        return np.zeros((len(grid), marks.size), dtype=np.complex128)
    if marks.min() < 1:
        msg = "checkpoints must be >= 1"
        raise LabValidationError(msg)
    top = int(marks.max())

    def run(block: Sequence[Phase]) -> list[np.ndarray]:
        rows: list[np.ndarray] = []
        for i in range(0, len(block), MAX_ROWS):
            sums, _ = _scan(block[i : i + MAX_ROWS], weights, 1, top, marks, anchor_interval)
            rows.extend(sums)
        return rows

    return np.array(partitioned_map(run, list(grid), workers)).reshape(len(grid), marks.size)


def prefix_max_grid(
    grid: Sequence[Phase],
    weights: WeightSeq,
    n_start: int,
    N: int,
    anchor_interval: int = DEFAULT_ANCHOR_INTERVAL,
    workers: int = 1,
) -> np.ndarray:
    """max_{n_start<=M<=N} |sum_{n_start<=n<=M} a_n e(phase(n))| を格子点ごとに返す"""
    if n_start < 1 or N < n_start:
        msg = f"need 1 <= n_start <= N, got ({n_start}, {N})"
        raise LabValidationError(msg)
    if not grid:
        return np.zeros(0, dtype=np.float64)

    def run(block: Sequence[Phase]) -> list[float]:
        no_marks = np.zeros(0, dtype=np.int64)
        peaks: list[float] = []
        for i in range(0, len(block), MAX_ROWS):
            _, peak = _scan(block[i : i + MAX_ROWS], weights, n_start, N, no_marks, anchor_interval)
            peaks.extend(peak.tolist())
        return peaks

    return np.array(partitioned_map(run, list(grid), workers), dtype=np.float64)
