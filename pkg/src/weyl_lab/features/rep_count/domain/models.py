from dataclasses import dataclass

from weyl_lab.core.errors import LabValidationError


def _check_degree(d: int) -> None:
    if d < 2:  # noqa: PLR2004
        msg = f"degree d must be >= 2, got {d}"
        raise LabValidationError(msg)


def _check_length(N: int) -> None:
    if N < 1:
        msg = f"N must be >= 1, got {N}"
        raise LabValidationError(msg)


@dataclass(frozen=True)
class RepQuery:
    """n1^d + n2^d - n3^d - n4^d = k (1 <= n_i <= N)"""

    d: int
    k: int
    N: int

    def __post_init__(self) -> None:
        _check_degree(self.d)
        _check_length(self.N)

    @property
    def in_range(self) -> bool:
        """|k| が取り得る最大差 2N^d - 2 以下か"""
        return abs(self.k) <= 2 * self.N**self.d - 2


@dataclass(frozen=True)
class PairSystemQuery:
    """n1 + n2 - n3 - n4 = k かつ n1^2 + n2^2 - n3^2 - n4^2 = m"""

    k: int
    m: int
    N: int

    def __post_init__(self) -> None:
        _check_length(self.N)


@dataclass(frozen=True)
class RepCount:
    total: int
    diagonal: int

    def __post_init__(self) -> None:
        if not 0 <= self.diagonal <= self.total:
            msg = f"inconsistent count: total={self.total}, diagonal={self.diagonal}"
            raise LabValidationError(msg)

    @property
    def nondiagonal(self) -> int:
        return self.total - self.diagonal


@dataclass(frozen=True)
class PowerPairs:
    """m^d = n^d + k を満たす (m, n)"""

    count: int
    pairs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class NondiagProfile:
    d: int
    N: int
    shifts: tuple[int, ...]
    counts: tuple[int, ...]
    max_count: int
    argmax_shift: int | None
    exponent: float | None  # log(max) / log(N)
