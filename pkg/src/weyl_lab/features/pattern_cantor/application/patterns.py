"""
大値区間の選択と I(N, M, δ) パターンの検証。

プロファイル (和の部分和の最大値) を分離スケールの 1/4 間隔の格子で評価し、
閾値を超える点を左から貪欲に選ぶ。選ばれた点を中心に長さ δ の区間を置き、
親区間の N 等分セルに収まるように平行移動する。
"""

import math
from collections.abc import Callable, Sequence

import numpy as np

from weyl_lab.core import console
from weyl_lab.core.constants import DEFAULT_ANCHOR_INTERVAL
from weyl_lab.core.domain.interval import Interval
from weyl_lab.core.domain.lab_config import resolve_kernel_budget
from weyl_lab.core.errors import LabValidationError
from weyl_lab.core.services.budget import check_budget
from weyl_lab.features.pattern_cantor.domain.models import (
    Clause,
    GrowthSpec,
    Pattern,
    PatternReport,
    Selection,
    StabilityReport,
    Violation,
)
from weyl_lab.features.weyl_core.application.batch import prefix_max_grid
from weyl_lab.features.weyl_core.domain.models import Phase, PowerFamily, WeightSeq

type Profile = Callable[[np.ndarray], np.ndarray]

TOLERANCE = 1e-12
GRID_REFINEMENT = 4  # 格子間隔 = 分離スケール / 4
DEFAULT_C0 = 0.25
_BELOW_ONE = math.nextafter(1.0, 0.0)


def pattern_validate(p: Pattern) -> PatternReport:
    violations: list[Violation] = []
    if p.M == 0:
        violations.append(Violation(Clause.EMPTY, None, "pattern has no members"))

    width = p.cell_width
    occupied: dict[int, int] = {}
    for i, member in enumerate(p.members):
        if abs(member.length - p.delta) > TOLERANCE:
            detail = f"length {member.length!r} differs from delta {p.delta!r}"
            violations.append(Violation(Clause.LENGTH, i, detail))

        cell = math.floor((member.start - p.parent.start + TOLERANCE) / width)
        cell = min(max(cell, 0), p.N - 1)
        box = Interval(p.parent.start + cell * width, width)
        if not (p.parent.contains(member, TOLERANCE) and box.contains(member, TOLERANCE)):
            detail = f"[{member.start!r}, {member.end!r}] leaves cell {cell}"
            violations.append(Violation(Clause.CONTAINMENT, i, detail))

        if cell in occupied:
            detail = f"cell {cell} already holds member {occupied[cell]}"
            violations.append(Violation(Clause.SHARED_CELL, i, detail))
        else:
            occupied[cell] = i
    return PatternReport(tuple(violations))


def profile_grid(parent: Interval, step: float) -> np.ndarray:
    """parent 内のセル中心 start + (j + 1/2) step"""
    count = max(1, math.ceil(parent.length / step - TOLERANCE))
    points = parent.start + (np.arange(count, dtype=np.float64) + 0.5) * step
    return points[points < parent.end]


def select_separated(
    profile: Profile,
    parent: Interval,
    spacing: float,
    threshold: float,
    step: float | None = None,
) -> list[Selection]:
    """閾値以上の格子点を左から貪欲に選ぶ (隣り合う選択は spacing 以上離れる)"""
    if not spacing > 0:
        msg = f"spacing must be positive, got {spacing}"
        raise LabValidationError(msg)

    xs = profile_grid(parent, step or spacing / GRID_REFINEMENT)
    values = np.asarray(profile(xs), dtype=np.float64)

    selections: list[Selection] = []
    last = -math.inf
    for idx in np.flatnonzero(values >= threshold):
        x = float(xs[idx])
        if x - last >= spacing - TOLERANCE:
            witness = Interval(x - 0.5 * spacing, spacing)
            selections.append(Selection(x, float(values[idx]), witness))
            last = x
    return selections


def _torus_point(x: float, integral: bool) -> float:
    if integral:
        return x % 1.0
    if not 0.0 <= x <= 1.0:
        msg = f"non-integral power phases need x in [0, 1], got {x}"
        raise LabValidationError(msg)
    return min(x, _BELOW_ONE)


def power_profile(
    gamma: float,
    weights: WeightSeq,
    N: int,
    anchor_interval: int = DEFAULT_ANCHOR_INTERVAL,
    workers: int = 1,
) -> Profile:
    """x -> max_{N/2 < M <= N} |sum_{N/2 < n <= M} a_n e(x n^gamma)|"""
    family = PowerFamily(gamma)
    n_start = N // 2 + 1

    def profile(xs: np.ndarray) -> np.ndarray:
        grid: list[Phase] = [
            family.phase(_torus_point(float(x), family.is_integral)) for x in xs
        ]
        return prefix_max_grid(grid, weights, n_start, N, anchor_interval, workers)

    return profile


def _place_member(x: float, parent: Interval, cells: int, delta: float) -> Interval:
    """x を含む長さ delta の区間を x のセル内に置く"""
    width = parent.length / cells
    cell = min(max(math.floor((x - parent.start) / width), 0), cells - 1)
    low = parent.start + cell * width
    start = min(max(x - 0.5 * delta, low), low + width - delta)
    return Interval(start, delta)


def large_value_intervals(
    g: GrowthSpec,
    weights: WeightSeq,
    interval: Interval,
    N: int,
    c0: float = DEFAULT_C0,
    anchor_interval: int = DEFAULT_ANCHOR_INTERVAL,
    workers: int = 1,
    budget: int | None = None,
) -> Pattern:
    """
    interval 内で部分和の最大値が c0 sqrt(N) 以上となる分離された点を選び、パターンにする。

    分離スケール s = N^{-γ+1/2+τ}、メンバー長 δ = N^{-γ-τ}、
    分割数 N_split = ceil(N^{γ-1/2-τ} |I|) + 1。
    """
    if N < 2:  # noqa: PLR2004
        msg = f"N must be >= 2, got {N}"
        raise LabValidationError(msg)
    minimum = float(N) ** (2.0 - g.gamma)
    if interval.length < minimum * (1.0 - TOLERANCE):
        msg = f"interval length {interval.length} is below N^(-gamma+2) = {minimum}"
        raise LabValidationError(msg)
    if not c0 > 0:
        msg = f"c0 must be positive, got {c0}"
        raise LabValidationError(msg)

    spacing = float(N) ** g.separation_exponent
    step = spacing / GRID_REFINEMENT
    points = math.ceil(interval.length / step)
    check_budget("large-value profile", points * (N - N // 2), resolve_kernel_budget(budget))

    profile = power_profile(g.gamma, weights, N, anchor_interval, workers)
    threshold = c0 * math.sqrt(N)
    selections = select_separated(profile, interval, spacing, threshold, step)

    cells = math.ceil(float(N) ** (-g.separation_exponent) * interval.length) + 1
    delta = float(N) ** g.member_exponent
    members = tuple(_place_member(s.center, interval, cells, delta) for s in selections)
    return Pattern(
        parent=interval,
        N=cells,
        delta=delta,
        members=members,
        witnesses=tuple(s.witness for s in selections),
        values=tuple(s.value for s in selections),
    )


def endpoint_stability(
    patterns: Sequence[Pattern],
    gamma: float,
    weights: WeightSeq,
    N: int,
    c0: float = DEFAULT_C0,
    anchor_interval: int = DEFAULT_ANCHOR_INTERVAL,
    workers: int = 1,
) -> StabilityReport:
    """メンバーの両端点でプロファイルを再評価し、閾値との比の最小値を返す"""
    threshold = c0 * math.sqrt(N)
    centers = [v for p in patterns for v in p.values]
    ends = [x for p in patterns for m in p.members for x in (m.start, m.end)]
    if not ends:
        return StabilityReport(threshold, 0.0, 0.0)

    values = power_profile(gamma, weights, N, anchor_interval, workers)(np.array(ends))
    report = StabilityReport(
        threshold=threshold,
        min_center_ratio=min(centers) / threshold,
        min_endpoint_ratio=float(values.min()) / threshold,
    )
    if not report.stable:
        console.warn(
            f"endpoint profile fell to {report.min_endpoint_ratio:.3f} of the threshold (N={N})"
        )
    return report
