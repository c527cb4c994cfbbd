from sympy import Rational, continued_fraction_convergents, continued_fraction_iterator

from weyl_lab.core.errors import LabValidationError
from weyl_lab.features.arc_approx.domain.models import RationalApprox


def cf_approx(x: float, q_max: int) -> RationalApprox:
    """
    連分数の収束分数のうち分母が q_max 以下で最後のもの。

    倍精度の x は有限連分数なので必ず止まる。
    """
    if q_max < 1:
        msg = f"q_max must be >= 1, got {q_max}"
        raise LabValidationError(msg)
    if not 0.0 <= x < 1.0:
        msg = f"x must lie in [0, 1), got {x}"
        raise LabValidationError(msg)

    exact = Rational(*x.as_integer_ratio())
    best = Rational(0)
    for convergent in continued_fraction_convergents(continued_fraction_iterator(exact)):
        if convergent.q > q_max:
            break
        best = convergent
    xi = float(exact - best)
    return RationalApprox(int(best.p), int(best.q), xi)
