import math

import numpy as np

from weyl_lab.core.errors import LabValidationError
from weyl_lab.features.weyl_core.application.phase_arith import frac_mul, polynomial_phases
from weyl_lab.features.weyl_core.application.weights import TWO_PI, weight_values
from weyl_lab.features.weyl_core.domain.models import (
    FlatSumResult,
    GeneralPhase,
    MonomialPhase,
    Phase,
    PhaseKind,
    PhaseVector,
    PrefixMax,
    SumValue,
    WeightSeq,
)

# 直接評価で一度に展開する項数
CHUNK_TERMS = 1 << 20


def coefficient_row(phase: Phase) -> tuple[float, ...] | None:
    """多項式として厳密評価できる位相なら係数 (x_1..x_d) を返す"""
    match phase:
        case PhaseVector():
            return phase.coeffs
        case MonomialPhase():
            return phase.as_vector().coeffs
        case GeneralPhase(kind=PhaseKind.POLYNOMIAL):
            return phase.coeffs
        case GeneralPhase(kind=PhaseKind.POWER) if float(phase.gamma or 0).is_integer():
            return MonomialPhase(phase.x, int(phase.gamma or 0)).as_vector().coeffs
    return None


def float_phases(phase: GeneralPhase, n: np.ndarray) -> np.ndarray:
    """多項式でない位相を倍精度で評価する"""
    nf = n.astype(np.float64)
    if phase.kind is PhaseKind.POWER:
        raw = phase.x * np.power(nf, phase.gamma)
    else:
        raw = (phase.xi or 0.0) * nf * np.log(nf) + frac_mul(phase.x, n)
    out = np.mod(raw, 1.0)
    out[out >= 1.0] = 0.0
    return out


def phase_values(phase: Phase, n: np.ndarray) -> np.ndarray:
    """n の配列に対する位相 mod 1"""
    n_arr = np.asarray(n, dtype=np.int64)
    if n_arr.size and n_arr.min() < 1:
        msg = "phase evaluation needs n >= 1"
        raise LabValidationError(msg)
    row = coefficient_row(phase)
    if row is not None:
        return polynomial_phases(np.array([row]), n_arr)[0]
    assert isinstance(phase, GeneralPhase)
    return float_phases(phase, n_arr)


def phase_eval(phase: Phase, n: int) -> float:
    """x_1 n + ... + x_d n^d (または x f(n)) の小数部分"""
    return float(phase_values(phase, np.array([n]))[0])


def _terms(phase: Phase, weights: WeightSeq, start: int, count: int) -> np.ndarray:
    n = np.arange(start, start + count, dtype=np.int64)
    return weight_values(weights, count, start) * np.exp(TWO_PI * 1j * phase_values(phase, n))


def _check_length(N: int) -> None:
    if N < 0:
        msg = f"N must be non-negative, got {N}"
        raise LabValidationError(msg)


def weyl_sum(phase: Phase, weights: WeightSeq, N: int) -> SumValue:
    """sum_{n<=N} a_n e(phase(n)) を直接評価する"""
    _check_length(N)
    total = 0j
    for start in range(1, N + 1, CHUNK_TERMS):
        count = min(CHUNK_TERMS, N - start + 1)
        total += complex(_terms(phase, weights, start, count).sum())
    return SumValue(total, N)


def prefix_max(phase: Phase, weights: WeightSeq, N: int) -> PrefixMax:
    """max_{M<=N} |sum_{n<=M} ...| を1パスで求める (同値なら最小の M)"""
    if N < 1:
        msg = f"prefix_max needs N >= 1, got {N}"
        raise LabValidationError(msg)

    best, best_m, offset = -1.0, 0, 0j
    for start in range(1, N + 1, CHUNK_TERMS):
        count = min(CHUNK_TERMS, N - start + 1)
        partial = np.cumsum(_terms(phase, weights, start, count)) + offset
        mags = np.abs(partial)
        idx = int(np.argmax(mags))
        if mags[idx] > best:
            best, best_m = float(mags[idx]), start + idx
        offset = complex(partial[-1])
    return PrefixMax(best, best_m)


def flat_sum_demo(xi: float, N: int, resolution: int | None = None) -> FlatSumResult:
    """
    max_x |sum e(xi n log n + x n)| / sqrt(N) を x = j/R (R >= 4N) の格子で求める。

    e(j n / R) は整数 (j n mod R) から作るので x 側に丸め誤差は入らない。
    """
    if xi == 0 or not math.isfinite(xi):
        msg = "flat_sum_demo needs xi != 0 (xi = 0 is the geometric sum with sup N)"
        raise LabValidationError(msg)
    if N < 1:
        msg = f"N must be >= 1, got {N}"
        raise LabValidationError(msg)
    R = resolution if resolution is not None else 4 * N
    if R < 4 * N:
        msg = f"grid resolution must be at least 4N = {4 * N}, got {R}"
        raise LabValidationError(msg)

    n = np.arange(1, N + 1, dtype=np.int64)
    nf = n.astype(np.float64)
    base = np.exp(TWO_PI * 1j * np.mod(xi * nf * np.log(nf), 1.0))

    rows = max(1, CHUNK_TERMS // N)
    best, best_j = -1.0, 0
    for j0 in range(0, R, rows):
        j = np.arange(j0, min(R, j0 + rows), dtype=np.int64)
        residues = (j[:, None] * n[None, :]) % R
        sums = np.exp(TWO_PI * 1j * residues / R) @ base
        mags = np.abs(sums)
        idx = int(np.argmax(mags))
        if mags[idx] > best:
            best, best_j = float(mags[idx]), int(j[idx])
    return FlatSumResult(xi, N, R, best / math.sqrt(N), best_j / R)
