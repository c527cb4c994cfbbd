"""
モジュロ 1 の点列の (正規化しない) 離散度の厳密計算。

上限は開区間でとるので、点の過剰側は閉区間 [v_i, v_j] の極限 (0 にある点は含まない)、
不足側は端点 {0} ∪ {v} ∪ {1} を両端とする開区間で達成される。
"""

import math
from collections.abc import Sequence

import numpy as np

from weyl_lab.core.errors import LabValidationError, NumericalCheckError
from weyl_lab.features.discrepancy.domain.models import DiscrepancyResult
from weyl_lab.features.weyl_core.application.evaluator import phase_values
from weyl_lab.features.weyl_core.domain.models import PhaseVector

ORACLE_TOLERANCE = 1e-9


def _validate(points: np.ndarray) -> None:
    if points.size == 0:
        msg = "discrepancy needs at least one point"
        raise LabValidationError(msg)
    if not np.all((points >= 0.0) & (points < 1.0)):
        msg = "points must lie in [0, 1)"
        raise LabValidationError(msg)


def _excess(v: np.ndarray) -> tuple[float, float, float]:
    """max_{i<=j, v_i>0} (j - N v_j) - (i - 1 - N v_i) (添字は 1 始まり)"""
    N = v.size
    idx = np.arange(1, N + 1, dtype=np.float64)
    start = int(np.searchsorted(v, 0.0, side="right"))  # v_i > 0 の最初
    if start == N:
        return 0.0, 0.0, 0.0
    a_vals = idx[start:] - N * v[start:]
    b_vals = idx[start:] - 1.0 - N * v[start:]
    running = np.minimum.accumulate(b_vals)
    arg_running = _running_argmin(b_vals)
    gains = a_vals - running
    j = int(np.argmax(gains))
    i = int(arg_running[j])
    return float(gains[j]), float(v[start + i]), float(v[start + j])


def _running_argmin(values: np.ndarray) -> np.ndarray:
    """各位置までの最小値を与える添字"""
    running = np.minimum.accumulate(values)
    marks = np.where(values == running, np.arange(values.size), 0)
    return np.maximum.accumulate(marks)


def _deficit(v: np.ndarray) -> tuple[float, float, float]:
    """max_{i<j} (N e_j - S^-(e_j)) - (N e_i - S(e_i)) (e は相異なる端点)"""
    N = v.size
    ends = np.unique(np.concatenate([[0.0], v, [1.0]]))
    below = np.searchsorted(v, ends, side="left").astype(np.float64)  # S^-(e)
    upto = np.searchsorted(v, ends, side="right").astype(np.float64)  # S(e)
    f_vals = N * ends - below
    g_vals = N * ends - upto
    running = np.minimum.accumulate(g_vals[:-1])
    arg_running = _running_argmin(g_vals[:-1])
    gains = f_vals[1:] - running
    j = int(np.argmax(gains))
    return float(gains[j]), float(ends[arg_running[j]]), float(ends[j + 1])


def disc_oracle(points: Sequence[float] | np.ndarray) -> float:
    """端点の全ての組を調べる O(N^2) の検算"""
    v = np.sort(np.asarray(points, dtype=np.float64))
    _validate(v)
    N = v.size
    ends = np.unique(np.concatenate([[0.0], v, [1.0]]))
    best = 0.0
    for a in ends:
        b = ends[ends >= a]
        # 不足: 開区間 (a, b)
        inside_open = np.searchsorted(v, b, side="left") - np.searchsorted(v, a, side="right")
        deficit = N * (b - a) - inside_open
        best = max(best, float(deficit[b > a].max(initial=0.0)))
        # 過剰: 閉区間 [a, b] (0 にある点は開区間に入らない)
        if a > 0:
            closed = np.searchsorted(v, b, side="right") - np.searchsorted(v, a, side="left")
            excess = closed - N * (b - a)
            best = max(best, float(excess.max(initial=0.0)))
    return best


def disc_exact(points: Sequence[float] | np.ndarray, verify: bool = False) -> DiscrepancyResult:
    """上側と下側の片側統計を端点で評価して合わせる (O(N log N))"""
    v = np.sort(np.asarray(points, dtype=np.float64))
    _validate(v)
    excess = _excess(v)
    deficit = _deficit(v)
    value, a, b = max(excess, deficit, key=lambda t: t[0])
    result = DiscrepancyResult(value, a, b, v.size)

    if verify:
        reference = disc_oracle(v)
        if not math.isclose(value, reference, rel_tol=ORACLE_TOLERANCE, abs_tol=ORACLE_TOLERANCE):
            msg = f"discrepancy {value} disagrees with the endpoint-pair oracle {reference}"
            raise NumericalCheckError(msg)
    return result


def sequence_points(x: PhaseVector, N: int) -> np.ndarray:
    """x_1 n + ... + x_d n^d mod 1 (n = 1..N)"""
    if N < 1:
        msg = f"N must be >= 1, got {N}"
        raise LabValidationError(msg)
    return phase_values(x, np.arange(1, N + 1, dtype=np.int64))


def disc_for_phase(x: PhaseVector, N: int, verify: bool = False) -> DiscrepancyResult:
    return disc_exact(sequence_points(x, N), verify)
