"""
|sum beta_k e(z y_k)|^{2nu} の区間積分を M + E に分けて厳密に求めるカーネル。

等しい周波数をまとめた後、
  M = δ sum_g |B_g|^2,
  E = sum_{g≠h} B'_g conj(B'_h) (e(δ t) - 1) / (2πi t),  t = Y_g - Y_h,  B'_g = B_g e(α Y_g)
整数周波数では e(δ Y_g) を厳密位相から作るので、t が大きくても位相が崩れない。
"""

from collections.abc import Callable

import numpy as np

from weyl_lab.core.domain.interval import Interval
from weyl_lab.core.domain.lab_config import resolve_kernel_budget, resolve_spectrum_budget
from weyl_lab.core.errors import LabValidationError, NumericalCheckError
from weyl_lab.core.services.budget import check_budget
from weyl_lab.features.moment_lab.domain.models import MomentResult, Spectrum
from weyl_lab.features.weyl_core.application.phase_arith import frac_mul
from weyl_lab.features.weyl_core.application.weights import TWO_PI

COLLAPSE_TOLERANCE = 1e-9
SERIES_THRESHOLD = 1e-6
ROW_BLOCK_ELEMENTS = 1 << 22


# ==========================================
#  Spectrum construction
# ==========================================


def _sum_by_label(labels: np.ndarray, coeffs: np.ndarray, count: int) -> np.ndarray:
    re = np.bincount(labels, weights=coeffs.real, minlength=count)
    im = np.bincount(labels, weights=coeffs.imag, minlength=count)
    return re + 1j * im


def collapse_spectrum(
    frequencies: np.ndarray, coefficients: np.ndarray, rel_tol: float = COLLAPSE_TOLERANCE
) -> Spectrum:
    """
    等しい周波数の係数をまとめる。

    整数周波数は完全一致、実数周波数は 1e-9 * max|y| 以内を同一とみなす
    (代表値はグループ内の最小値)。
    """
    freqs = np.asarray(frequencies)
    coeffs = np.asarray(coefficients, dtype=np.complex128)
    if freqs.shape != coeffs.shape:
        msg = f"frequencies and coefficients differ in length: {freqs.shape} vs {coeffs.shape}"
        raise LabValidationError(msg)

    if freqs.dtype.kind in "iuO":
        values, labels = np.unique(freqs, return_inverse=True)
        return Spectrum(values, _sum_by_label(labels.ravel(), coeffs, values.size))

    y = freqs.astype(np.float64)
    order = np.argsort(y, kind="stable")
    ys = y[order]
    tol = rel_tol * float(np.max(np.abs(ys))) if ys.size else 0.0
    breaks = np.concatenate([[True], np.diff(ys) > tol])
    labels = np.cumsum(breaks) - 1
    return Spectrum(ys[breaks], _sum_by_label(labels, coeffs[order], int(breaks.sum())))


def pair_spectrum(base: Spectrum, spectrum_budget: int | None = None) -> Spectrum:
    """{(y_i + y_j, beta_i beta_j)} を縮約したもの (4乗モーメント用)"""
    K = base.size
    required = K * (K + 1) // 2
    check_budget("pair-spectrum build", required, resolve_spectrum_budget(spectrum_budget))

    i, j = np.triu_indices(K)
    values = base.frequencies[i] + base.frequencies[j]
    weights = base.coefficients[i] * base.coefficients[j] * np.where(i == j, 1.0, 2.0)
    return collapse_spectrum(values, weights)


# ==========================================
#  Kernels
# ==========================================


def exact_phases(x: float, frequencies: np.ndarray) -> np.ndarray:
    """frac(x y) (整数周波数は厳密、実数周波数は倍精度)"""
    if frequencies.dtype.kind in "iuO":
        return frac_mul(x, frequencies)
    return np.mod(x * frequencies.astype(np.float64), 1.0)


def _differences(rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """t = y_g - y_h を float で (整数は差を取ってから変換)"""
    if rows.dtype.kind in "iu" and cols.dtype.kind in "iu":
        return (rows[:, None] - cols[None, :]).astype(np.float64)
    if rows.dtype.kind == "O" or cols.dtype.kind == "O":
        return np.subtract.outer(rows, cols).astype(np.float64)
    return rows.astype(np.float64)[:, None] - cols.astype(np.float64)[None, :]


def interval_kernel(
    u_rows: np.ndarray, u_cols: np.ndarray, t: np.ndarray, delta: float
) -> np.ndarray:
    """
    (e(δ t) - 1) / (2πi t)。 e(δ t) = u_g conj(u_h), u = e(frac(δ y))。

    |δ t| が小さいときは級数 δ(1 + iπδt) を使う (t = 0 では δ)。
    """
    dt = delta * t
    small = np.abs(dt) < SERIES_THRESHOLD
    numerator = u_rows[:, None] * np.conj(u_cols)[None, :] - 1.0
    denom = np.where(small, 1.0, TWO_PI * 1j * t)
    return np.where(small, delta * (1.0 + 1j * np.pi * dt), numerator / denom)


type BlockKernel = Callable[[slice, slice], np.ndarray]


def upper_triangle_sum(rotated: np.ndarray, block_kernel: BlockKernel) -> complex:
    """
    E = sum_{g≠h} B'_g conj(B'_h) K_gh を 2 Re sum_{g<h} で求める (K はエルミート)。

    block_kernel(rows, cols) は行ブロック x 列ブロックのカーネル行列を返す。
    """
    K = rotated.size
    upper = 0j
    rows_per_block = max(1, ROW_BLOCK_ELEMENTS // max(K, 1))
    for r0 in range(0, K - 1, rows_per_block):
        r1 = min(K - 1, r0 + rows_per_block)
        rows, cols = slice(r0, r1), slice(r0 + 1, K)
        kernel = block_kernel(rows, cols)
        # 上三角 (h > g) のみ
        above = np.arange(r0 + 1, K)[None, :] > np.arange(r0, r1)[:, None]
        kernel = np.where(above, kernel, 0.0)
        upper += complex(rotated[rows] @ (kernel @ np.conj(rotated[cols])))
    return complex(2.0 * upper.real, 0.0)


def _offdiag_sum(spec: Spectrum, interval: Interval) -> complex:
    y = spec.frequencies
    rotated = spec.coefficients * np.exp(TWO_PI * 1j * exact_phases(interval.start, y))
    u = np.exp(TWO_PI * 1j * exact_phases(interval.length, y))

    def block(rows: slice, cols: slice) -> np.ndarray:
        t = _differences(y[rows], y[cols])
        return interval_kernel(u[rows], u[cols], t, interval.length)

    return upper_triangle_sum(rotated, block)


def spectral_moment(
    spec: Spectrum, interval: Interval, nu: int, n_terms: int, budget: int | None = None
) -> MomentResult:
    """縮約済みスペクトルの |.|^2 積分 (nu は記録用)"""
    check_budget("moment kernel", spec.size**2, resolve_kernel_budget(budget))

    diagonal = interval.length * float(np.sum(np.abs(spec.coefficients) ** 2))
    offdiag = _offdiag_sum(spec, interval) if spec.size > 1 else 0j
    total = diagonal + offdiag.real
    check_moment_bounds(total, diagonal, interval.length, n_terms, nu)
    return MomentResult(
        total=max(total, 0.0),
        diagonal_M=diagonal,
        offdiag_E=offdiag,
        nu=nu,
        N=n_terms,
        delta=interval.length,
        distinct=spec.size,
    )


def check_moment_bounds(total: float, diagonal: float, delta: float, K: int, nu: int) -> None:
    if total < -1e-6 * max(diagonal, 1.0):
        msg = f"moment total {total} is negative beyond tolerance (M = {diagonal})"
        raise NumericalCheckError(msg)
    crude = delta * float(K) ** (2 * nu)
    if total > crude * (1 + 1e-9) + 1e-9:
        msg = f"moment total {total} exceeds the crude bound delta*K^(2nu) = {crude}"
        raise NumericalCheckError(msg)


def exact_moment(
    frequencies: np.ndarray,
    coefficients: np.ndarray,
    interval: Interval,
    nu: int,
    budget: int | None = None,
    spectrum_budget: int | None = None,
) -> MomentResult:
    """int_α^{α+δ} |sum beta_k e(z y_k)|^{2nu} dz を M + E で厳密に求める"""
    freqs = np.asarray(frequencies)
    coeffs = np.asarray(coefficients, dtype=np.complex128)
    if freqs.size == 0 or freqs.shape != coeffs.shape:
        msg = "frequencies and coefficients must be non-empty lists of equal length"
        raise LabValidationError(msg)
    if nu not in (1, 2):
        msg = f"nu must be 1 or 2, got {nu}"
        raise LabValidationError(msg)
    if not np.allclose(np.abs(coeffs), 1.0, atol=1e-9):
        msg = "coefficients must be unimodular"
        raise LabValidationError(msg)

    spec = collapse_spectrum(freqs, coeffs)
    if nu == 2:
        spec = pair_spectrum(spec, spectrum_budget)
    return spectral_moment(spec, interval, nu, freqs.size, budget)
