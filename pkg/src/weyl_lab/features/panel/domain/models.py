from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

from weyl_lab.core.domain.lab_config import LabConfig


@dataclass(frozen=True)
class PanelContext:
    """
    パネル実行時の共通パラメータ。

    tolerance_scale は各判定の許容幅に掛かる (0 にすると許容幅のある判定は落ちる)。
    """

    config: LabConfig = field(default_factory=LabConfig)
    tolerance_scale: float = 1.0

    def tol(self, value: float) -> float:
        return value * self.tolerance_scale

    @property
    def workers(self) -> int:
        return self.config.workers

    def within(self, value: float, target: float, tolerance: float) -> bool:
        return abs(value - target) <= self.tol(tolerance)

    def in_band(self, value: float, low: float, high: float, center: float = 1.0) -> bool:
        """[low, high] を center のまわりで tolerance_scale 倍に縮めた帯"""
        return center - self.tol(center - low) <= value <= center + self.tol(high - center)


@dataclass(frozen=True)
class Outcome:
    passed: bool
    measured: dict[str, Any] = field(default_factory=dict)
    detail: str = ""


@dataclass(frozen=True)
class Criterion:
    """パネルの判定項目 1 つ"""

    name: str
    group: str
    description: str
    check: Callable[[PanelContext], Outcome] = field(repr=False)


@dataclass(frozen=True)
class CriterionResult:
    name: str
    group: str
    passed: bool
    measured: dict[str, Any]
    detail: str
    wall_time: float


@dataclass(frozen=True)
class PanelSummary:
    results: tuple[CriterionResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[str]:
        return [r.name for r in self.results if not r.passed]
