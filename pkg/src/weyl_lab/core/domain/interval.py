import math
from dataclasses import dataclass
from typing import Self

from weyl_lab.core.errors import LabValidationError


@dataclass(frozen=True)
class Interval:
    """実数直線上の区間 [start, start + length]"""

    start: float
    length: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.start) and math.isfinite(self.length)):
            msg = f"Interval bounds must be finite: ({self.start}, {self.length})"
            raise LabValidationError(msg)
        if self.length <= 0:
            msg = f"Interval length must be positive, got {self.length}"
            raise LabValidationError(msg)

    @classmethod
    def torus(cls, start: float, length: float) -> Self:
        """トーラス T = [0,1) 上の区間として生成 (start ∈ [0,1), length ≤ 1)"""
        if not 0.0 <= start < 1.0:
            msg = f"Torus interval start must lie in [0,1), got {start}"
            raise LabValidationError(msg)
        if length > 1.0:
            msg = f"Torus interval length must be at most 1, got {length}"
            raise LabValidationError(msg)
        return cls(start, length)

    @classmethod
    def full(cls) -> Self:
        return cls(0.0, 1.0)

    @property
    def end(self) -> float:
        return self.start + self.length

    @property
    def center(self) -> float:
        return self.start + 0.5 * self.length

    @property
    def is_torus(self) -> bool:
        return 0.0 <= self.start < 1.0 and self.length <= 1.0

    def contains(self, other: "Interval", tol: float = 1e-12) -> bool:
        return self.start - tol <= other.start and other.end <= self.end + tol

    def split(self, count: int) -> list["Interval"]:
        """count 等分した部分区間"""
        width = self.length / count
        return [Interval(self.start + i * width, width) for i in range(count)]


@dataclass(frozen=True)
class Box:
    """各次元の区間の直積"""

    sides: tuple[Interval, ...]

    def __post_init__(self) -> None:
        if not self.sides:
            msg = "Box needs at least one side"
            raise LabValidationError(msg)

    @classmethod
    def cube(cls, side: Interval, dim: int) -> Self:
        return cls(tuple(side for _ in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.sides)

    @property
    def volume(self) -> float:
        return math.prod(side.length for side in self.sides)


type Region = Interval | Box


def region_volume(region: Region) -> float:
    return region.length if isinstance(region, Interval) else region.volume
