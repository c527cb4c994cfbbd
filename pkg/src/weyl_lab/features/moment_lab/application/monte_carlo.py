import math

import numpy as np

from weyl_lab.core.domain.interval import Box, Interval, Region, region_volume
from weyl_lab.core.domain.lab_config import resolve_kernel_budget
from weyl_lab.core.errors import LabValidationError
from weyl_lab.core.services.budget import check_budget
from weyl_lab.features.moment_lab.application.kernels import exact_phases, interval_kernel
from weyl_lab.features.moment_lab.domain.models import MonteCarloEstimate, VarianceResult
from weyl_lab.features.weyl_core.application.batch import batch_eval
from weyl_lab.features.weyl_core.application.phase_arith import power_frequencies
from weyl_lab.features.weyl_core.application.weights import TWO_PI, weight_values
from weyl_lab.features.weyl_core.domain.models import Phase, PhaseVector, PowerFamily, WeightSeq

MIN_SAMPLES = 16
_SAMPLE_BLOCK = 256


def _random_phases(
    family: PowerFamily | None, region: Region, samples: int, rng: np.random.Generator
) -> list[Phase]:
    if isinstance(region, Interval):
        if family is None:
            msg = "an interval region needs a phase family"
            raise LabValidationError(msg)
        xs = np.mod(region.start + region.length * rng.random(samples), 1.0)
        return [family.phase(float(x)) for x in xs]

    starts = np.array([side.start for side in region.sides])
    lengths = np.array([side.length for side in region.sides])
    points = np.mod(starts + lengths * rng.random((samples, region.dim)), 1.0)
    points[points >= 1.0] = 0.0
    return [PhaseVector(tuple(float(c) for c in row)) for row in points]


def mc_moment(  # noqa: PLR0913
    family: PowerFamily | None,
    weights: WeightSeq,
    region: Region,
    N: int,
    nu: int,
    samples: int,
    seed: int,
    workers: int = 1,
) -> MonteCarloEstimate:
    """
    int_region |S|^{2nu} の一様乱数による不偏推定。

    区間なら family の位相 x f(n)、箱なら x_1 n + ... + x_d n^d (d = 箱の次元)。
    """
    if samples < MIN_SAMPLES:
        msg = f"mc_moment needs at least {MIN_SAMPLES} samples, got {samples}"
        raise LabValidationError(msg)
    if nu < 1:
        msg = f"nu must be positive, got {nu}"
        raise LabValidationError(msg)
    if isinstance(region, Box) and family is not None:
        msg = "box regions integrate the full polynomial phase; pass family=None"
        raise LabValidationError(msg)

    rng = np.random.default_rng(seed)
    phases = _random_phases(family, region, samples, rng)
    sums = np.array([v.value for v in batch_eval(phases, weights, N, workers=workers)])
    values = np.abs(sums) ** (2 * nu)

    volume = region_volume(region)
    estimate = volume * float(values.mean())
    stderr = volume * float(values.std(ddof=1)) / math.sqrt(samples)
    return MonteCarloEstimate(estimate, stderr, samples, seed)


def variance_integral(  # noqa: PLR0913
    gamma: float,
    weights: WeightSeq,
    x1: float,
    eps1: float,
    eps0: float,
    N: int,
    samples: int,
    seed: int,
    budget: int | None = None,
) -> VarianceResult:
    """
    int_{x1}^{x1+ε1} ( int_{x0}^{x0+ε0} |sum_{M<n<=N} a_n e(x n^γ)|^2 dx - ε0 (N-M) )^2 dx0

    内側は ν=1 カーネルで厳密に、外側は x0 の一様サンプルで推定する (M = N // 2)。
    内側の値は w^T G conj(w) (w_g = a_g e(x0 y_g), G は対角を除いたカーネル行列)。
    """
    if not gamma > 2:  # noqa: PLR2004
        msg = f"variance integral needs gamma > 2, got {gamma}"
        raise LabValidationError(msg)
    for name, eps in (("eps0", eps0), ("eps1", eps1)):
        if not 0 < eps < 1:
            msg = f"{name} must lie in (0, 1), got {eps}"
            raise LabValidationError(msg)
    if N < 8:  # noqa: PLR2004
        msg = f"N must be >= 8, got {N}"
        raise LabValidationError(msg)
    if samples < 2:  # noqa: PLR2004
        msg = f"need at least 2 samples, got {samples}"
        raise LabValidationError(msg)

    M = N // 2
    count = N - M
    check_budget("variance kernel", count * count, resolve_kernel_budget(budget))

    n = np.arange(M + 1, N + 1, dtype=np.int64)
    y = power_frequencies(gamma, n)
    a = weight_values(weights, count, M + 1)

    u = np.exp(TWO_PI * 1j * exact_phases(eps0, y))
    if y.dtype.kind == "f":
        t = y[:, None] - y[None, :]
    else:
        t = np.subtract.outer(y, y).astype(np.float64)
    gram = interval_kernel(u, u, t, eps0)
    np.fill_diagonal(gram, 0.0)

    rng = np.random.default_rng(seed)
    x0 = x1 + eps1 * rng.random(samples)
    inner = np.empty(samples, dtype=np.float64)
    for s0 in range(0, samples, _SAMPLE_BLOCK):
        block = x0[s0 : s0 + _SAMPLE_BLOCK]
        w = a[None, :] * np.exp(TWO_PI * 1j * np.stack([exact_phases(x, y) for x in block]))
        inner[s0 : s0 + block.size] = ((w @ gram) * np.conj(w)).sum(axis=1).real

    squared = inner**2
    value = eps1 * float(squared.mean())
    stderr = eps1 * float(squared.std(ddof=1)) / math.sqrt(samples)
    reference = float(N) ** (-2 * gamma + 3) * (eps1 + float(N) ** (-gamma + 2))
    return VarianceResult(value, stderr, eps0, eps1, N, M, samples, reference)
