from dataclasses import dataclass
from fractions import Fraction

from weyl_lab.core.errors import LabValidationError

type Number = float | Fraction

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class DimQuery:
    d: int
    alpha: Number

    def __post_init__(self) -> None:
        if self.d < 2:  # noqa: PLR2004
            msg = f"d must be >= 2, got {self.d}"
            raise LabValidationError(msg)
        if not HALF <= self.alpha <= 1:
            msg = f"alpha must lie in [1/2, 1], got {self.alpha}"
            raise LabValidationError(msg)

    @property
    def at_boundary(self) -> bool:
        """α = 1/2 (定理の範囲 (1/2, 1) の端点での評価)"""
        return self.alpha == HALF


@dataclass(frozen=True)
class TheoremBounds:
    thmf: Number | None  # 1 - 1/(2γ) (γ > 2)
    thmd2: Number | None  # 1 - 1/γ (γ > 1)


@dataclass(frozen=True)
class DimReport:
    d: int
    alpha: Number
    s: Number
    u: Number
    monomial: Number
    boundary_alpha: bool
