import math
from dataclasses import dataclass, field

import numpy as np

from weyl_lab.core.domain.interval import Interval, Region
from weyl_lab.core.errors import LabValidationError
from weyl_lab.features.weyl_core.domain.models import MonomialPhase, Phase, PhaseVector

SERIES_LIMIT = 2 * math.pi**2 / 54  # (2/9) sum n^{-2}


@dataclass(frozen=True)
class ScanThresholds:
    """|S| ∈ [c sqrt(N), C sqrt(N)] の閾値と、2次・4次モーメントの比 α1, α2"""

    c: float
    C: float
    alpha1: float = 1.0
    alpha2: float = 2.0

    def __post_init__(self) -> None:
        if not (self.c >= 0 and self.C > self.c):
            msg = f"need 0 <= c < C, got c={self.c}, C={self.C}"
            raise LabValidationError(msg)
        if not (math.isfinite(self.alpha1) and math.isfinite(self.alpha2)):
            msg = "alpha1 and alpha2 must be finite"
            raise LabValidationError(msg)


@dataclass(frozen=True)
class SumKind:
    """単項式和 sum a_n e(x n^d) か、全係数の和 S_d(x; N) か"""

    d: int
    full: bool = False

    def __post_init__(self) -> None:
        if self.d < 1:
            msg = f"degree must be >= 1, got {self.d}"
            raise LabValidationError(msg)

    @property
    def dim(self) -> int:
        return self.d if self.full else 1

    def phase(self, point: np.ndarray) -> Phase:
        if self.full:
            return PhaseVector(tuple(float(v) for v in point))
        return MonomialPhase(float(point[0]), self.d)

    def check_region(self, region: Region) -> None:
        dim = 1 if isinstance(region, Interval) else region.dim
        if dim != self.dim:
            msg = f"region has dimension {dim}, the sum needs {self.dim}"
            raise LabValidationError(msg)
        if not all(side.is_torus and side.end <= 1.0 for side in region_sides(region)):
            msg = "scan regions must lie inside [0, 1]"
            raise LabValidationError(msg)


def region_sides(region: Region) -> tuple[Interval, ...]:
    return (region,) if isinstance(region, Interval) else region.sides


@dataclass(frozen=True)
class LadderReport:
    """
    N の梯子上の命中表。

    hits[g, j] は格子点 g で c sqrt(N_j) <= |S| <= C sqrt(N_j)。
    tail_fractions[j] は N >= N_j のどれかで命中した割合 (j について非増加)。
    """

    Ns: tuple[int, ...]
    hits: np.ndarray = field(repr=False)
    union_fraction: float
    tail_fractions: tuple[float, ...]
    level_fractions: tuple[float, ...]
    predicted: float | None = None  # ε0 (モーメント比から)

    @property
    def grid_size(self) -> int:
        return int(self.hits.shape[0])


@dataclass(frozen=True)
class MomentPrediction:
    alpha1: float
    alpha2: float
    epsilon0: float
    fraction: float


@dataclass(frozen=True)
class CounterexampleA:
    """
    A = T ∩ ⋃_n ⋃_a [a/3^n - r_n, a/3^n + r_n], r_n = 3^{-n-2} n^{-2} の測度と局所密度。
    """

    measure_bound: float  # 級数の n_max までの和 + 尾部
    measure_estimate: float  # 解像した世代の和集合 (T 全体)
    density: float  # λ(A ∩ J) / λ(J) の下界
    density_upper: float
    generations: int  # 和集合を厳密に求めた世代数
    bracket: int | None  # 3^{-n} n^3 <= δ < 3^{-n+1} (n-1)^3 となる n
    log_scale: float  # (log 1/δ)^{-2}
    series_limit: float = SERIES_LIMIT

    @property
    def scaled_density(self) -> float:
        return self.density / self.log_scale if self.log_scale > 0 else math.inf

