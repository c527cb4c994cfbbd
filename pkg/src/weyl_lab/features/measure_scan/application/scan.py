"""
Weyl 和の大きさが c sqrt(N) と C sqrt(N) の間に入る点の割合を格子で測る。

格子は等間隔で、シード付きの乱数オフセットだけずらす (有理点に格子が揃うのを避ける)。
「無限に多くの N」は有限の梯子の尾部和集合で代用する。
"""

from collections.abc import Sequence

import numpy as np

from weyl_lab.core import console
from weyl_lab.core.constants import DEFAULT_ANCHOR_INTERVAL
from weyl_lab.core.domain.interval import Interval, Region
from weyl_lab.core.errors import LabValidationError, NumericalCheckError
from weyl_lab.features.measure_scan.domain.models import (
    LadderReport,
    MomentPrediction,
    ScanThresholds,
    SumKind,
    region_sides,
)
from weyl_lab.features.moment_lab.application.moments import (
    fourth_moment_interval,
    second_moment_interval,
)
from weyl_lab.features.weyl_core.application.batch import batch_partial_sums
from weyl_lab.features.weyl_core.domain.models import PowerFamily, WeightSeq

MIN_GRID = 1000
DEFAULT_GRID = 4096


def epsilon0(t: ScanThresholds) -> float:
    """(α1 - c^2 - α2 / C^2) / C^2 (0 以下もそのまま返す)"""
    C2 = t.C * t.C
    return (t.alpha1 - t.c * t.c - t.alpha2 / C2) / C2


def sample_grid(region: Region, count: int, seed: int = 0) -> np.ndarray:
    """
    region 上の等間隔格子 [G, dim] (各軸をシード付きの一様乱数でずらす)。

    多次元では1軸あたり round(count^(1/dim)) 点の直積。
    """
    sides = region_sides(region)
    per_axis = max(1, round(count ** (1.0 / len(sides))))
    rng = np.random.default_rng(seed)
    axes = []
    for side in sides:
        offset = rng.random()
        u = (np.arange(per_axis, dtype=np.float64) + offset) / per_axis
        axes.append(np.mod(side.start + side.length * u, 1.0))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _magnitudes(
    kind: SumKind,
    weights: WeightSeq,
    points: np.ndarray,
    Ns: Sequence[int],
    anchor_interval: int,
    workers: int,
) -> np.ndarray:
    grid = [kind.phase(p) for p in points]
    return np.abs(batch_partial_sums(grid, weights, Ns, anchor_interval, workers))


def _shell(mags: np.ndarray, Ns: Sequence[int], c: float, C: float) -> np.ndarray:
    roots = np.sqrt(np.asarray(Ns, dtype=np.float64))[None, :]
    return (mags >= c * roots) & (mags <= C * roots)


def _check_scan(kind: SumKind, region: Region, grid: int) -> None:
    kind.check_region(region)
    if grid < MIN_GRID:
        msg = f"grid needs at least {MIN_GRID} points, got {grid}"
        raise LabValidationError(msg)


def indicator_fraction(
    kind: SumKind,
    weights: WeightSeq,
    region: Region,
    N: int,
    c: float,
    C: float,
    grid: int = DEFAULT_GRID,
    seed: int = 0,
    anchor_interval: int = DEFAULT_ANCHOR_INTERVAL,
    workers: int = 1,
) -> float:
    """c sqrt(N) <= |S(x; N)| <= C sqrt(N) となる格子点の割合"""
    ScanThresholds(c, C)
    _check_scan(kind, region, grid)
    if N < 1:
        msg = f"N must be >= 1, got {N}"
        raise LabValidationError(msg)
    points = sample_grid(region, grid, seed)
    mags = _magnitudes(kind, weights, points, [N], anchor_interval, workers)
    return float(_shell(mags, [N], c, C).mean())


def ladder_stats(  # noqa: PLR0913
    kind: SumKind,
    weights: WeightSeq,
    region: Region,
    Ns: Sequence[int],
    c: float,
    C: float,
    grid: int = DEFAULT_GRID,
    seed: int = 0,
    alphas: tuple[float, float] | None = None,
    anchor_interval: int = DEFAULT_ANCHOR_INTERVAL,
    workers: int = 1,
) -> LadderReport:
    """
    梯子の各 N での命中と、N_j 以上のどれかで命中した点の割合。

    alphas = (α1, α2) を渡すと ε0 を予測値として並べる。
    """
    thresholds = ScanThresholds(c, C, *(alphas or (1.0, 2.0)))
    _check_scan(kind, region, grid)
    ladder = [int(N) for N in Ns]
    if not ladder or ladder[0] < 1 or any(b <= a for a, b in zip(ladder, ladder[1:], strict=False)):
        msg = f"ladder must be strictly increasing positive integers, got {ladder}"
        raise LabValidationError(msg)

    points = sample_grid(region, grid, seed)
    mags = _magnitudes(kind, weights, points, ladder, anchor_interval, workers)
    hits = _shell(mags, ladder, c, C)

    # 後ろから累積 OR: tail[:, j] = any(hits[:, j:])
    tail = np.logical_or.accumulate(hits[:, ::-1], axis=1)[:, ::-1]
    tail_fractions = tail.mean(axis=0)
    if np.any(np.diff(tail_fractions) > 0):
        msg = "tail-union fractions increased along the ladder"
        raise NumericalCheckError(msg)

    report = LadderReport(
        Ns=tuple(ladder),
        hits=hits,
        union_fraction=float(tail_fractions[0]),
        tail_fractions=tuple(float(f) for f in tail_fractions),
        level_fractions=tuple(float(f) for f in hits.mean(axis=0)),
        predicted=epsilon0(thresholds) if alphas is not None else None,
    )
    console.info(
        f"ladder {ladder[0]}..{ladder[-1]}: union {report.union_fraction:.4f},"
        f" last tail {report.tail_fractions[-1]:.4f} on {report.grid_size} points"
    )
    return report


def moment_prediction(
    d: int,
    weights: WeightSeq,
    interval: Interval,
    N: int,
    c: float,
    C: float,
    grid: int = DEFAULT_GRID,
    seed: int = 0,
    budget: int | None = None,
    workers: int = 1,
) -> MomentPrediction:
    """
    区間上の2次・4次モーメント比 α1, α2 を厳密に測り、ε0 と実測の割合を並べる。

    α1 = int_I |S|^2 / (|I| N), α2 = int_I |S|^4 / (|I| N^2)。
    """
    second = second_moment_interval(PowerFamily(d), weights, interval, N, budget=budget)
    fourth = fourth_moment_interval(d, weights, interval, N, budget)
    alpha1 = second.total / (interval.length * N)
    alpha2 = fourth.total / (interval.length * N * N)
    predicted = epsilon0(ScanThresholds(c, C, alpha1, alpha2))
    fraction = indicator_fraction(
        SumKind(d), weights, interval, N, c, C, grid, seed, workers=workers
    )
    if predicted > 0 and fraction < predicted:
        console.warn(f"measured fraction {fraction:.4f} is below the predicted {predicted:.4f}")
    return MomentPrediction(alpha1, alpha2, predicted, fraction)

