"""
次元公式の閉形式。

α に Fraction を渡せば有理数のまま厳密に評価される (区分の境界 1/2, 3/5, 5/6, 6/7 の検算用)。
"""

from fractions import Fraction

from weyl_lab.core.errors import LabValidationError
from weyl_lab.features.dim_calc.domain.models import (
    DimQuery,
    DimReport,
    Number,
    TheoremBounds,
)


def theta(i: int, alpha: Number) -> Number:
    """ϑ_i = i / (2(1-α)) - 1"""
    if not 0 < alpha < 1:
        msg = f"theta needs alpha in (0, 1), got {alpha}"
        raise LabValidationError(msg)
    return i / (2 * (1 - alpha)) - 1


def s_dim(d: int, alpha: Number) -> Number:
    """
    𝔰(d, α) = min_{j=1..d} (d + 1 + j ϑ_j - sum_{i<=j} ϑ_i) / (1 + ϑ_j)

    α = 1 では極限値 0 を返す。
    """
    q = DimQuery(d, alpha)
    if alpha == 1:
        return 0 * alpha
    thetas = [theta(i, q.alpha) for i in range(1, d + 1)]
    if sum(thetas) < 1:
        msg = f"s_dim requires sum of theta_i >= 1 (d={d}, alpha={alpha})"
        raise LabValidationError(msg)

    values = []
    partial = 0 * alpha
    for j, th in enumerate(thetas, start=1):
        partial += th
        values.append((d + 1 + j * th - partial) / (1 + th))
    return min(values)


def u_dim(d: int, alpha: Number) -> Number:
    """𝔲(d, α) = min_{k=0..d-1} ((2d^2 + 4d)(1-α) + k(k+1)) / (4 - 2α + 2k)"""
    DimQuery(d, alpha)
    return min(
        ((2 * d * d + 4 * d) * (1 - alpha) + k * (k + 1)) / (4 - 2 * alpha + 2 * k)
        for k in range(d)
    )


def s_half(d: int) -> Fraction:
    """𝔰(d, 1/2) = min_j (2(d+1) + j^2 - j) / (2j)"""
    if d < 2:  # noqa: PLR2004
        msg = f"d must be >= 2, got {d}"
        raise LabValidationError(msg)
    return min(Fraction(2 * (d + 1) + j * j - j, 2 * j) for j in range(1, d + 1))


def s_dim_d2(alpha: Number) -> Number:
    """d = 2 の区分形: (7-6α)/2 (α <= 5/6), 6(1-α) (α > 5/6)"""
    DimQuery(2, alpha)
    if alpha <= Fraction(5, 6):
        return (7 - 6 * alpha) / 2
    return 6 * (1 - alpha)


def u_dim_d2(alpha: Number) -> Number:
    """d = 2 の区分形: (9-8α)/(3-α) (α <= 6/7), 8(1-α)/(2-α) (α > 6/7)"""
    DimQuery(2, alpha)
    if alpha <= Fraction(6, 7):
        return (9 - 8 * alpha) / (3 - alpha)
    return 8 * (1 - alpha) / (2 - alpha)


def monomial_conj_dim(d: int, alpha: Number) -> Number:
    """4(1-α)/d"""
    DimQuery(d, alpha)
    return 4 * (1 - alpha) / d


def jb_kappa(d: int, alpha: Number, eps: Number = 0) -> Number:
    """近似の指数 κ = d / (2(1-α)) + d ε"""
    if not 0 < alpha < 1 or eps < 0:
        msg = f"jb_kappa needs alpha in (0, 1) and eps >= 0, got ({alpha}, {eps})"
        raise LabValidationError(msg)
    return d / (2 * (1 - alpha)) + d * eps


def jb_dim(kappa: Number) -> Number:
    """2/κ (κ >= 2)"""
    if kappa < 2:  # noqa: PLR2004
        msg = f"jb_dim needs kappa >= 2, got {kappa}"
        raise LabValidationError(msg)
    return 2 / kappa


def theorem_bounds(gamma: Number) -> TheoremBounds:
    thmf = 1 - 1 / (2 * gamma) if gamma > 2 else None  # noqa: PLR2004
    thmd2 = 1 - 1 / gamma if gamma > 1 else None
    return TheoremBounds(thmf, thmd2)


def mean_value_exponent(d: int) -> int:
    """s(d) = d(d+1)/2"""
    if d < 1:
        msg = f"d must be >= 1, got {d}"
        raise LabValidationError(msg)
    return d * (d + 1) // 2


def dim_report(d: int, alpha: Number) -> DimReport:
    """𝔰, 𝔲 と単項式予想の次元をまとめて評価する"""
    q = DimQuery(d, alpha)
    return DimReport(
        d=d,
        alpha=alpha,
        s=s_dim(d, alpha),
        u=u_dim(d, alpha),
        monomial=monomial_conj_dim(d, alpha),
        boundary_alpha=q.at_boundary,
    )
