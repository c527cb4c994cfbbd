import math
from dataclasses import dataclass, field
from enum import Enum, auto

import numpy as np

from weyl_lab.core.domain.interval import Interval
from weyl_lab.core.errors import LabValidationError

MAX_DEPTH = 4


# =============================================================================
# Patterns
# =============================================================================
@dataclass(frozen=True)
class Pattern:
    """
    I(N, M, δ) パターン: parent を N 等分した小区間のうち M 個に、長さ δ の区間が1つずつ入る。

    witnesses は選択に使った区間 (長さ = 分離スケール)、values は中心でのプロファイル値。
    """

    parent: Interval
    N: int
    delta: float
    members: tuple[Interval, ...]
    witnesses: tuple[Interval, ...] = ()
    values: tuple[float, ...] = ()

    @property
    def M(self) -> int:
        return len(self.members)

    @property
    def cell_width(self) -> float:
        return self.parent.length / self.N


class Clause(Enum):
    EMPTY = 0  # M = 0
    LENGTH = 1  # 長さが δ でない
    SHARED_CELL = 2  # 同じ小区間に2つ以上
    CONTAINMENT = 3  # 小区間に収まっていない


@dataclass(frozen=True)
class Violation:
    clause: Clause
    member: int | None
    detail: str


@dataclass(frozen=True)
class PatternReport:
    violations: tuple[Violation, ...]

    @property
    def valid(self) -> bool:
        return not self.violations

    def clauses(self) -> set[Clause]:
        return {v.clause for v in self.violations}


@dataclass(frozen=True)
class Selection:
    center: float
    value: float
    witness: Interval


@dataclass(frozen=True)
class StabilityReport:
    """中心と両端点でのプロファイル値 (閾値に対する比)"""

    threshold: float
    min_center_ratio: float
    min_endpoint_ratio: float
    tolerance: float = 2.0

    @property
    def stable(self) -> bool:
        return self.min_endpoint_ratio * self.tolerance >= 1.0


# =============================================================================
# Growth and Cantor levels
# =============================================================================
TOWER_MAX_BITS = 4096  # 整数のまま扱う塔型スケールの上限


def _checked_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        msg = f"scale e^{x:.6g} overflows a double"
        raise LabValidationError(msg) from None


class GrowthRule(Enum):
    SQUARE = auto()  # L_{k+1} = L_k^2
    POWER = auto()  # L_{k+1} = L_k^p
    TOWER = auto()  # log L_{k+1} = L_1 L_2 ... L_k
    EXPLICIT = auto()


@dataclass(frozen=True)
class GrowthSpec:
    gamma: float
    tau: float
    rule: GrowthRule = GrowthRule.SQUARE
    initial: int = 32
    power: float = 2.0
    scales: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not self.gamma > 1:
            msg = f"gamma must be > 1, got {self.gamma}"
            raise LabValidationError(msg)
        if not self.tau > 0:
            msg = f"tau must be positive, got {self.tau}"
            raise LabValidationError(msg)
        if self.gamma > 2 and not self.tau < (self.gamma - 2) / 2:  # noqa: PLR2004
            msg = f"tau must be below (gamma-2)/2 = {(self.gamma - 2) / 2}, got {self.tau}"
            raise LabValidationError(msg)
        if self.rule is GrowthRule.EXPLICIT and not self.scales:
            msg = "explicit growth needs the list of scales"
            raise LabValidationError(msg)
        if self.rule is not GrowthRule.EXPLICIT and self.initial < 2:  # noqa: PLR2004
            msg = f"initial scale must be >= 2, got {self.initial}"
            raise LabValidationError(msg)
        if self.rule is GrowthRule.POWER and not self.power > 1:
            msg = f"growth power must be > 1, got {self.power}"
            raise LabValidationError(msg)

    @property
    def separation_exponent(self) -> float:
        """分離スケール L^{-γ+1/2+τ} の指数"""
        return -self.gamma + 0.5 + self.tau

    @property
    def member_exponent(self) -> float:
        """メンバー長 L^{-γ-τ} の指数"""
        return -self.gamma - self.tau

    def first_scale(self) -> int:
        return self.scales[0] if self.rule is GrowthRule.EXPLICIT else self.initial

    def next_scale(self, k: int, previous: int) -> int:
        """L_{k+1} (k は直前の段の番号, 1 始まり)"""
        match self.rule:
            case GrowthRule.SQUARE:
                return previous * previous
            case GrowthRule.POWER:
                return math.ceil(previous**self.power)
            case GrowthRule.TOWER:
                # L_1 ... L_k = L_k log L_k (k >= 2) なので L_{k+1} = L_k^{L_k}
                if k >= 2:  # noqa: PLR2004
                    if previous * previous.bit_length() > TOWER_MAX_BITS:
                        msg = f"tower scale {previous}^{previous} is only available in log space"
                        raise LabValidationError(msg)
                    return previous**previous
                return math.ceil(_checked_exp(previous))
            case GrowthRule.EXPLICIT:
                if k >= len(self.scales):
                    msg = f"explicit growth lists {len(self.scales)} scales, level {k + 1} needed"
                    raise LabValidationError(msg)
                return self.scales[k]
        msg = f"unknown growth rule {self.rule}"
        raise ValueError(msg)

    def log_next(self, k: int, log_previous: float) -> float:
        """log L_{k+1} を log L_k から求める (k は直前の段の番号)"""
        if self.rule is GrowthRule.SQUARE:
            return 2.0 * log_previous
        if self.rule is GrowthRule.POWER:
            return self.power * log_previous
        if self.rule is GrowthRule.TOWER:
            scale = _checked_exp(log_previous)
            log_next = scale * log_previous if k >= 2 else scale  # noqa: PLR2004
            if not math.isfinite(log_next):
                msg = f"tower growth overflows at level {k + 1}"
                raise LabValidationError(msg)
            return log_next
        msg = "log-space schedules need a closed-form growth rule, not EXPLICIT"
        raise LabValidationError(msg)


@dataclass(frozen=True)
class CantorLevel:
    """k 段目の全区間 (左端の昇順と共通の長さ δ_k)"""

    k: int
    N_k: int
    M_k: int
    delta_k: float
    starts: np.ndarray = field(repr=False)
    L_k: int | None = None
    centers: np.ndarray | None = field(default=None, repr=False)  # 選択点 (starts と同順)

    @property
    def count(self) -> int:
        return int(self.starts.size)

    @property
    def intervals(self) -> list[Interval]:
        return [Interval(float(s), self.delta_k) for s in self.starts]


@dataclass(frozen=True)
class CantorBuild:
    levels: tuple[CantorLevel, ...]
    c0: float
    truncated: bool = False
    report: str | None = None
    patterns: int = 0  # 検証したパターンの数
    stability: tuple[StabilityReport, ...] = ()  # 段ごとの端点再評価


@dataclass(frozen=True)
class ScheduleLevel:
    """対数で持つ段のパラメータ (値そのものは倍精度を超える)"""

    k: int
    log_L: float
    log_M: float
    log_inv_delta: float


@dataclass(frozen=True)
class MassRow:
    r: float
    max_mass: float
    ratio: float  # max_mass / r^t
