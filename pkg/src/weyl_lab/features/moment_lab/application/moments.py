import numpy as np

from weyl_lab.core.domain.interval import Box, Interval
from weyl_lab.core.domain.lab_config import resolve_kernel_budget, resolve_spectrum_budget
from weyl_lab.core.errors import LabValidationError
from weyl_lab.core.services.budget import check_budget
from weyl_lab.features.moment_lab.application.kernels import (
    check_moment_bounds,
    collapse_spectrum,
    exact_moment,
    exact_phases,
    interval_kernel,
    upper_triangle_sum,
)
from weyl_lab.features.moment_lab.domain.models import MomentResult, SumRange
from weyl_lab.features.weyl_core.application.phase_arith import power_frequencies
from weyl_lab.features.weyl_core.application.weights import TWO_PI, weight_values
from weyl_lab.features.weyl_core.domain.models import PowerFamily, WeightSeq


def _with_ratio(result: MomentResult, scale: float) -> MomentResult:
    return MomentResult(
        total=result.total,
        diagonal_M=result.diagonal_M,
        offdiag_E=result.offdiag_E,
        nu=result.nu,
        N=result.N,
        delta=result.delta,
        distinct=result.distinct,
        ratio=result.total / scale,
    )


def _check_interval(interval: Interval) -> None:
    if not 0 < interval.length <= 1:
        msg = f"interval length must lie in (0, 1], got {interval.length}"
        raise LabValidationError(msg)


def second_moment_interval(
    family: PowerFamily,
    weights: WeightSeq,
    interval: Interval,
    N: int,
    sum_range: SumRange = SumRange.INITIAL,
    budget: int | None = None,
) -> MomentResult:
    """
    int_I |sum_n a_n e(x f(n))|^2 dx (n は 1..N または N..2N)。

    ratio = total / (δ * 項数)
    """
    _check_interval(interval)
    if N < 2:  # noqa: PLR2004
        msg = f"N must be >= 2, got {N}"
        raise LabValidationError(msg)

    start, count = sum_range.bounds(N)
    n = np.arange(start, start + count, dtype=np.int64)
    result = exact_moment(
        power_frequencies(family.gamma, n),
        weight_values(weights, count, start),
        interval,
        1,
        budget,
    )
    return _with_ratio(result, interval.length * count)


def fourth_moment_interval(
    d: int, weights: WeightSeq, interval: Interval, N: int, budget: int | None = None
) -> MomentResult:
    """int_I |sum_{n<=N} a_n e(x n^d)|^4 dx。 ratio = total / (2 δ N^2)"""
    _check_interval(interval)
    if d < 2 or N < 1:  # noqa: PLR2004
        msg = f"need d >= 2 and N >= 1, got d={d}, N={N}"
        raise LabValidationError(msg)

    n = np.arange(1, N + 1, dtype=np.int64)
    result = exact_moment(
        power_frequencies(d, n), weight_values(weights, N), interval, 2, budget
    )
    return _with_ratio(result, 2.0 * interval.length * N * N)


# ==========================================
#  Two-dimensional (x_1 n + x_2 n^2) fourth moment
# ==========================================


def _quadratic_pairs(weights: WeightSeq, N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(n1+n2, n1^2+n2^2) ごとに a_{n1} a_{n2} をまとめる"""
    a = weight_values(weights, N)
    n = np.arange(1, N + 1, dtype=np.int64)
    i, j = np.triu_indices(N)
    u = n[i] + n[j]
    v = n[i] ** 2 + n[j] ** 2
    base = 2 * N * N + 1  # v < base
    spec = collapse_spectrum(u * base + v, a[i] * a[j] * np.where(i == j, 1.0, 2.0))
    keys = spec.frequencies.astype(np.int64)
    return keys // base, keys % base, spec.coefficients


def quadratic_pair_moment(
    box: Box,
    weights: WeightSeq,
    N: int,
    budget: int | None = None,
    spectrum_budget: int | None = None,
) -> MomentResult:
    """
    int_{I1 x I2} |sum_{n<=N} a_n e(x1 n + x2 n^2)|^4 dx1 dx2 を分離積カーネルで厳密に求める。
    """
    if box.dim != 2:  # noqa: PLR2004
        msg = f"quadratic_pair_moment needs a two-dimensional box, got dim={box.dim}"
        raise LabValidationError(msg)
    first, second = box.sides
    _check_interval(first)
    _check_interval(second)
    if N < 1:
        msg = f"N must be >= 1, got {N}"
        raise LabValidationError(msg)

    check_budget("pair-spectrum build", N * (N + 1) // 2, resolve_spectrum_budget(spectrum_budget))
    U, V, B = _quadratic_pairs(weights, N)
    K = U.size
    check_budget("moment kernel", K * K, resolve_kernel_budget(budget))

    start_phase = exact_phases(first.start, U) + exact_phases(second.start, V)
    rotated = B * np.exp(TWO_PI * 1j * start_phase)
    u1 = np.exp(TWO_PI * 1j * exact_phases(first.length, U))
    u2 = np.exp(TWO_PI * 1j * exact_phases(second.length, V))

    delta = first.length * second.length
    diagonal = delta * float(np.sum(np.abs(B) ** 2))

    def block(rows: slice, cols: slice) -> np.ndarray:
        t1 = (U[rows, None] - U[None, cols]).astype(np.float64)
        t2 = (V[rows, None] - V[None, cols]).astype(np.float64)
        return interval_kernel(u1[rows], u1[cols], t1, first.length) * interval_kernel(
            u2[rows], u2[cols], t2, second.length
        )

    offdiag = upper_triangle_sum(rotated, block)
    total = diagonal + offdiag.real
    check_moment_bounds(total, diagonal, delta, N, 2)
    return MomentResult(
        total=max(total, 0.0),
        diagonal_M=diagonal,
        offdiag_E=offdiag,
        nu=2,
        N=N,
        delta=delta,
        distinct=K,
        ratio=total / (delta * (2 * N * N - N)),
    )
