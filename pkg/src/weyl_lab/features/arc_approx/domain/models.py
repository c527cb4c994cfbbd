import math
from dataclasses import dataclass
from typing import Self

from weyl_lab.core.errors import LabValidationError


@dataclass(frozen=True)
class RationalApprox:
    """x = a/q + xi"""

    a: int
    q: int
    xi: float

    def __post_init__(self) -> None:
        if self.q < 1:
            msg = f"denominator must be positive, got {self.q}"
            raise LabValidationError(msg)
        if math.gcd(self.a, self.q) != 1:
            msg = f"a/q must be reduced, got {self.a}/{self.q}"
            raise LabValidationError(msg)


@dataclass(frozen=True)
class BakerApprox:
    """x_i = a_i/q + xi_i (i = 1..d)"""

    avec: tuple[int, ...]
    q: int
    xivec: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.q < 1:
            msg = f"denominator must be positive, got {self.q}"
            raise LabValidationError(msg)
        if not self.avec or len(self.avec) != len(self.xivec):
            msg = "avec and xivec must be non-empty and of equal length"
            raise LabValidationError(msg)

    @classmethod
    def from_point(cls, xvec: tuple[float, ...], q: int) -> Self:
        """各係数を分母 q の最も近い分数で近似する"""
        if q < 1:
            msg = f"denominator must be positive, got {q}"
            raise LabValidationError(msg)
        nearest = [round(x * q) for x in xvec]
        return cls(
            tuple(a % q for a in nearest),
            q,
            tuple(x - a / q for x, a in zip(xvec, nearest, strict=True)),
        )

    @property
    def d(self) -> int:
        return len(self.avec)

    @property
    def D(self) -> int:
        """gcd(a_2, ..., a_d, q)"""
        return math.gcd(*self.avec[1:], self.q)

    def is_valid(self, N: int) -> bool:
        """|xi_i| <= 1 / (2 d^2 q N^{i-1}) が全ての i で成り立つか"""
        d = self.d
        return all(
            abs(xi) <= 1.0 / (2 * d * d * self.q * float(N) ** (i - 1))
            for i, xi in enumerate(self.xivec, start=1)
        )


@dataclass(frozen=True)
class ArcResult:
    main: complex
    error_budget: float
    valid: bool = True


@dataclass(frozen=True)
class ScanRow:
    x: float
    a: int
    q: int
    xi: float
    major: bool
    direct: float
    main: float | None = None
    residual_ratio: float | None = None


@dataclass(frozen=True)
class PanelPoint:
    d: int
    a: int
    q: int
    xi: float
    N: int
