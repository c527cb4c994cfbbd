"""
有限段のカントール階層と、その次元推定・質量分布の確認。

k 段目の各区間の中で大値区間を選び直し、全親で最小の M_k に揃えて次の段を作る。
次元は dim ≈ min_k log(prod M_i) / log(1/δ_k) で見積もる。
"""

import math
from collections.abc import Sequence
from typing import Any

import numpy as np

from weyl_lab.core import console
from weyl_lab.core.constants import DEFAULT_ANCHOR_INTERVAL
from weyl_lab.core.domain.interval import Interval
from weyl_lab.core.errors import BudgetExceededError, LabValidationError, NumericalCheckError
from weyl_lab.core.services.parallel import partitioned_map
from weyl_lab.features.pattern_cantor.application.patterns import (
    DEFAULT_C0,
    TOLERANCE,
    endpoint_stability,
    large_value_intervals,
    pattern_validate,
)
from weyl_lab.features.pattern_cantor.domain.models import (
    MAX_DEPTH,
    CantorBuild,
    CantorLevel,
    GrowthSpec,
    MassRow,
    Pattern,
    ScheduleLevel,
    StabilityReport,
)
from weyl_lab.features.weyl_core.domain.models import WeightSeq


def _required_scale(g: GrowthSpec, parent_length: float) -> int:
    """|J| >= L^{-γ+2} を満たす最小の L (γ <= 2 なら制約なし)"""
    if g.gamma <= 2:  # noqa: PLR2004
        return 2
    return math.ceil(parent_length ** (-1.0 / (g.gamma - 2.0)) * (1.0 - TOLERANCE))


def _root_level(root: Interval) -> CantorLevel:
    return CantorLevel(0, 1, 1, root.length, np.array([root.start]))


def cantor_build(
    g: GrowthSpec,
    weights: WeightSeq,
    root: Interval,
    depth: int,
    c0: float = DEFAULT_C0,
    anchor_interval: int = DEFAULT_ANCHOR_INTERVAL,
    workers: int = 1,
    budget: int | None = None,
    check_stability: bool = True,
) -> CantorBuild:
    """
    大値区間のパターンを depth 段まで入れ子にする。

    check_stability なら各段のメンバー両端点でプロファイルを再評価する (段ごとの報告)。

    どこかの親で選択が空になれば、その手前で打ち切った結果を report 付きで返す。
    """
    if depth < 0:
        msg = f"depth must be non-negative, got {depth}"
        raise LabValidationError(msg)
    if depth > MAX_DEPTH:
        raise BudgetExceededError("cantor depth", depth, MAX_DEPTH)
    if not root.is_torus:
        msg = f"root must lie in [0, 1], got [{root.start}, {root.end}]"
        raise LabValidationError(msg)

    levels = [_root_level(root)]
    checked = 0
    stability: list[StabilityReport] = []
    scale = 0

    for k in range(1, depth + 1):
        parent = levels[-1]
        proposed = g.first_scale() if k == 1 else g.next_scale(k - 1, scale)
        scale = max(proposed, _required_scale(g, parent.delta_k))
        if scale != proposed:
            console.info(f"level {k}: scale raised from {proposed} to {scale}")

        def build(block: Sequence[Interval], L: int = scale) -> list[Pattern]:
            return [
                large_value_intervals(g, weights, J, L, c0, anchor_interval, 1, budget)
                for J in block
            ]

        patterns = partitioned_map(build, parent.intervals, workers)
        for i, pattern in enumerate(patterns):
            report = pattern_validate(pattern)
            if pattern.M and not report.valid:
                msg = f"level {k} pattern {i} is invalid: {report.violations[0].detail}"
                raise NumericalCheckError(msg)
            if pattern.values and min(pattern.values) < c0 * math.sqrt(scale):
                msg = f"level {k} pattern {i} has a centre below c0 sqrt(N)"
                raise NumericalCheckError(msg)
        checked += len(patterns)

        target = float(scale) ** (-g.separation_exponent) * parent.delta_k
        counts = [p.M for p in patterns]
        console.info(
            f"level {k}: L={scale}, selections per parent {min(counts)}..{max(counts)}"
            f" (scaling target {target:.3g})"
        )

        M_k = min(counts)
        if M_k == 0:
            empty = sum(c == 0 for c in counts)
            note = f"level {k}: {empty} of {len(patterns)} parents produced no selections"
            console.warn(note)
            return CantorBuild(
                tuple(levels),
                c0,
                truncated=True,
                report=note,
                patterns=checked,
                stability=tuple(stability),
            )

        N_k = patterns[0].N
        delta_k = patterns[0].delta
        if delta_k > parent.delta_k / N_k * (1.0 + TOLERANCE):
            msg = f"level {k}: delta {delta_k} exceeds parent delta / N = {parent.delta_k / N_k}"
            raise NumericalCheckError(msg)

        kept = [_truncated(p, M_k) for p in patterns]
        starts = np.array([m.start for p in kept for m in p.members], dtype=np.float64)
        centers = np.array([w.center for p in kept for w in p.witnesses], dtype=np.float64)
        order = np.argsort(starts, kind="stable")
        levels.append(CantorLevel(k, N_k, M_k, delta_k, starts[order], scale, centers[order]))
        if check_stability:
            stability.append(
                endpoint_stability(kept, g.gamma, weights, scale, c0, anchor_interval, workers)
            )

    return CantorBuild(tuple(levels), c0, patterns=checked, stability=tuple(stability))


def _truncated(p: Pattern, count: int) -> Pattern:
    return Pattern(
        p.parent, p.N, p.delta, p.members[:count], p.witnesses[:count], p.values[:count]
    )


def regular_cantor(n_cells: int, kept: Sequence[int], depth: int) -> list[CantorLevel]:
    """[0,1) を n_cells 等分して kept 番目のセルを残す操作を depth 回 (中三分集合など)"""
    cells = sorted(set(kept))
    if n_cells < 2 or not cells or cells[0] < 0 or cells[-1] >= n_cells:  # noqa: PLR2004
        msg = f"kept cells must be a non-empty subset of 0..{n_cells - 1}, got {list(kept)}"
        raise LabValidationError(msg)
    if depth < 0:
        msg = f"depth must be non-negative, got {depth}"
        raise LabValidationError(msg)

    offsets = np.array(cells, dtype=np.float64)
    levels = [_root_level(Interval.full())]
    for k in range(1, depth + 1):
        delta = float(n_cells) ** -k
        starts = (levels[-1].starts[:, None] + offsets[None, :] * delta).ravel()
        levels.append(CantorLevel(k, n_cells, len(cells), delta, starts))
    return levels


# ==========================================
#  Dimension estimate
# ==========================================


def synthetic_schedule(g: GrowthSpec, levels: int) -> list[ScheduleLevel]:
    """
    δ_k = L_k^{-γ-τ}, M_k = δ_{k-1} L_k^{γ-1/2-τ} を対数のまま並べる (床関数は省略)。
    """
    if levels < 1:
        msg = f"need at least one level, got {levels}"
        raise LabValidationError(msg)
    log_L = math.log(g.first_scale())
    log_inv_delta_prev = 0.0
    schedule = []
    for k in range(1, levels + 1):
        if k > 1:
            log_L = g.log_next(k - 1, log_L)
        log_inv_delta = (g.gamma + g.tau) * log_L
        log_M = -g.separation_exponent * log_L - log_inv_delta_prev
        schedule.append(ScheduleLevel(k, log_L, log_M, log_inv_delta))
        log_inv_delta_prev = log_inv_delta
    return schedule


def _log_pairs(levels: Sequence[Any]) -> list[tuple[float, float]]:
    """(log M_k, log 1/δ_k) の列 (0 段目は除く)"""
    pairs = []
    for level in levels:
        match level:
            case ScheduleLevel(log_M=log_M, log_inv_delta=log_inv_delta):
                pairs.append((log_M, log_inv_delta))
            case CantorLevel(k=0):
                continue
            case CantorLevel(M_k=M, delta_k=delta) | (M, delta):
                if not 0 < delta < 1:
                    msg = f"delta must lie in (0, 1), got {delta}"
                    raise LabValidationError(msg)
                if M < 1:
                    msg = f"M must be >= 1, got {M}"
                    raise LabValidationError(msg)
                pairs.append((math.log(M), -math.log(delta)))
            case _:
                msg = f"unsupported level description: {level!r}"
                raise LabValidationError(msg)
    return pairs


def cantor_dim_estimate(levels: Sequence[Any]) -> float:
    """
    min_k log(prod_{i<=k} M_i) / log(1/δ_k)。

    levels は CantorLevel, ScheduleLevel, または (M_k, δ_k) の組。
    """
    pairs = _log_pairs(levels)
    if not pairs:
        msg = "dimension estimate needs at least one level"
        raise LabValidationError(msg)
    if any(b[1] <= a[1] for a, b in zip(pairs, pairs[1:], strict=False)):
        msg = "delta_k must be strictly decreasing"
        raise LabValidationError(msg)
    if pairs[0][1] <= 0:
        msg = "delta must be below 1"
        raise LabValidationError(msg)

    log_mass = np.cumsum([p[0] for p in pairs])
    log_inv_delta = np.array([p[1] for p in pairs])
    return float((log_mass / log_inv_delta).min())


# ==========================================
#  Mass distribution
# ==========================================


def _cdf(starts: np.ndarray, delta: float, x: np.ndarray) -> np.ndarray:
    """最深段の各区間に等質量を一様に載せた測度の分布関数"""
    j = np.searchsorted(starts, x, side="right") - 1
    inside = np.clip((x - starts[np.maximum(j, 0)]) / delta, 0.0, 1.0)
    return np.where(j >= 0, (j + inside) / starts.size, 0.0)


def mass_check(levels: Sequence[CantorLevel], radii: Sequence[float], t: float) -> list[MassRow]:
    """各半径 r で max_B μ(B(r)) / r^t (最大は端点 ± r を中心とする球でとる)"""
    if not levels:
        msg = "mass check needs at least one level"
        raise LabValidationError(msg)
    if any(level.k > 0 for level in levels):
        estimate = cantor_dim_estimate(levels)
        if not t < estimate:
            msg = f"t must be below the dimension estimate {estimate:.6f}, got {t}"
            raise LabValidationError(msg)

    deepest = levels[-1]
    starts = np.sort(deepest.starts)
    delta = deepest.delta_k
    ends = np.concatenate([starts, starts + delta])

    rows = []
    for r in radii:
        if not r > 0:
            msg = f"radius must be positive, got {r}"
            raise LabValidationError(msg)
        centers = np.concatenate([ends - r, ends + r])
        masses = _cdf(starts, delta, centers + r) - _cdf(starts, delta, centers - r)
        max_mass = float(masses.max())
        rows.append(MassRow(float(r), max_mass, max_mass / float(r) ** t))
    return rows
