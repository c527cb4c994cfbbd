from dataclasses import dataclass


@dataclass(frozen=True)
class DiscrepancyResult:
    """
    D_N = sup_{0<=a<b<=1} |#{x_n in (a,b)} - (b-a)N|

    (a, b) は上限を与える端点 (点の過剰なら閉区間 [a, b] の極限, 不足なら開区間)。
    """

    value: float
    a: float
    b: float
    N: int

    @property
    def argmax(self) -> tuple[float, float]:
        return (self.a, self.b)


@dataclass(frozen=True)
class KoksmaProbe:
    sum_magnitude: float
    discrepancy: float
    ratio: float


@dataclass(frozen=True)
class LadderPoint:
    N: int
    value: float
    normalized: float  # D / sqrt(N)
