import math
from dataclasses import dataclass, field
from enum import Enum, auto
from typing import Self

from weyl_lab.core.errors import LabValidationError


def _check_unit(value: float, name: str) -> None:
    if not (math.isfinite(value) and 0.0 <= value < 1.0):
        msg = f"{name} must lie in [0,1), got {value}"
        raise LabValidationError(msg)


# =============================================================================
# Phases
# =============================================================================
@dataclass(frozen=True)
class PhaseVector:
    """多項式位相 x_1 n + ... + x_d n^d の係数ベクトル"""

    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            msg = "PhaseVector needs at least one coefficient (degree >= 1)"
            raise LabValidationError(msg)
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        for i, c in enumerate(self.coeffs, start=1):
            _check_unit(c, f"coefficient x_{i}")

    @classmethod
    def zero(cls, degree: int) -> Self:
        return cls((0.0,) * degree)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    def lower(self) -> "PhaseVector | None":
        """最高次を除いた係数 (x_1, ..., x_{d-1})"""
        return PhaseVector(self.coeffs[:-1]) if self.degree > 1 else None


@dataclass(frozen=True)
class MonomialPhase:
    """単項位相 x n^d"""

    x: float
    degree: int

    def __post_init__(self) -> None:
        _check_unit(self.x, "monomial coefficient x")
        if self.degree < 1:
            msg = f"degree must be >= 1, got {self.degree}"
            raise LabValidationError(msg)

    def as_vector(self) -> PhaseVector:
        return PhaseVector((0.0,) * (self.degree - 1) + (self.x,))


class PhaseKind(Enum):
    POLYNOMIAL = auto()
    POWER = auto()  # x * n^gamma
    NLOGN = auto()  # xi * n log n + x * n


@dataclass(frozen=True)
class GeneralPhase:
    kind: PhaseKind
    x: float = 0.0
    gamma: float | None = None
    xi: float | None = None
    coeffs: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        match self.kind:
            case PhaseKind.POLYNOMIAL:
                PhaseVector(self.coeffs)
            case PhaseKind.POWER:
                _check_unit(self.x, "power-phase coefficient x")
                if self.gamma is None or not self.gamma > 1:
                    msg = f"power phase needs gamma > 1, got {self.gamma}"
                    raise LabValidationError(msg)
            case PhaseKind.NLOGN:
                _check_unit(self.x, "linear coefficient x")
                if self.xi is None or not math.isfinite(self.xi):
                    msg = f"n log n phase needs a finite xi, got {self.xi}"
                    raise LabValidationError(msg)

    @classmethod
    def power(cls, x: float, gamma: float) -> Self:
        return cls(PhaseKind.POWER, x=x, gamma=gamma)

    @classmethod
    def nlogn(cls, xi: float, x: float) -> Self:
        return cls(PhaseKind.NLOGN, x=x, xi=xi)

    @classmethod
    def polynomial(cls, coeffs: tuple[float, ...]) -> Self:
        return cls(PhaseKind.POLYNOMIAL, coeffs=tuple(coeffs))


type Phase = PhaseVector | MonomialPhase | GeneralPhase


@dataclass(frozen=True)
class PowerFamily:
    """周波数列 f(n) = n^gamma (gamma が整数なら単項式族)"""

    gamma: float

    def __post_init__(self) -> None:
        if not self.gamma >= 1:
            msg = f"gamma must be >= 1, got {self.gamma}"
            raise LabValidationError(msg)

    @property
    def is_integral(self) -> bool:
        return float(self.gamma).is_integer()

    @property
    def degree(self) -> int:
        return int(self.gamma)

    def phase(self, x: float) -> Phase:
        if self.is_integral:
            return MonomialPhase(x, self.degree)
        return GeneralPhase.power(x, self.gamma)


# =============================================================================
# Weights
# =============================================================================
class WeightMode(Enum):
    ONES = auto()
    RANDOM = auto()  # 位相がシード付き一様乱数
    REDUCTION = auto()  # b_n = a_n e(P(n))


@dataclass(frozen=True)
class WeightSeq:
    """単位円上の重み列 a_n の生成規則"""

    mode: WeightMode = WeightMode.ONES
    seed: int | None = None
    twist: PhaseVector | None = None
    base: "WeightSeq | None" = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.mode is WeightMode.RANDOM and (self.seed is None or not 0 <= self.seed < 2**64):
            msg = f"random-phase weights need a 64-bit unsigned seed, got {self.seed}"
            raise LabValidationError(msg)
        if self.mode is WeightMode.REDUCTION and self.twist is None:
            msg = "reduction weights need the polynomial P"
            raise LabValidationError(msg)

    @classmethod
    def ones(cls) -> Self:
        return cls()

    @classmethod
    def random(cls, seed: int) -> Self:
        return cls(WeightMode.RANDOM, seed=seed)

    @classmethod
    def reduction(cls, lower: PhaseVector, base: "WeightSeq | None" = None) -> Self:
        """b_n = a_n e(x_1 n + ... + x_{d-1} n^{d-1})"""
        return cls(WeightMode.REDUCTION, twist=lower, base=base or cls.ones())

    def twisted(self, alpha: float, degree: int) -> "WeightSeq":
        """a_n e(alpha n^d) (平行移動共変性の確認用)"""
        shifted = MonomialPhase(alpha % 1.0, degree).as_vector()
        return WeightSeq(WeightMode.REDUCTION, twist=shifted, base=self)

    @property
    def is_stochastic(self) -> bool:
        if self.mode is WeightMode.RANDOM:
            return True
        return self.base is not None and self.base.is_stochastic


# =============================================================================
# Results
# =============================================================================
@dataclass(frozen=True)
class SumValue:
    value: complex
    n_terms: int

    @property
    def magnitude(self) -> float:
        return abs(self.value)


@dataclass(frozen=True)
class PrefixMax:
    value: float
    argmax: int


@dataclass(frozen=True)
class FlatSumResult:
    xi: float
    N: int
    resolution: int
    ratio: float  # max |S| / sqrt(N)
    argmax_x: float
