import math

from weyl_lab.core.constants import DEFAULT_QUADRATURE_NODES
from weyl_lab.core.errors import LabValidationError
from weyl_lab.features.arc_approx.application.complete_sums import complete_sum, gauss_sum
from weyl_lab.features.arc_approx.application.oscillatory import oscillatory_integral
from weyl_lab.features.arc_approx.domain.models import ArcResult, BakerApprox, RationalApprox


def vaughan_approx(
    r: RationalApprox, d: int, N: int, max_nodes: int = DEFAULT_QUADRATURE_NODES
) -> ArcResult:
    """
    main = q^{-1} sigma_d(a/q; q) int_0^N e(xi g^d) dg
    error_budget = q^{1/2} (1 + |xi| N^d)^{1/2}
    """
    xivec = (0.0,) * (d - 1) + (r.xi,)
    main = gauss_sum(r.a, r.q, d) / r.q * oscillatory_integral(xivec, N, max_nodes)
    budget = math.sqrt(r.q) * math.sqrt(1.0 + abs(r.xi) * float(N) ** d)
    return ArcResult(main, budget)


def baker_approx(
    b: BakerApprox, d: int, N: int, max_nodes: int = DEFAULT_QUADRATURE_NODES
) -> ArcResult:
    """
    main = q^{-1} S_d(avec/q; q) int_0^N e(xi_d g^d + ... + xi_1 g) dg
    error_budget = q^{1-1/d} D^{1/d}。条件を満たさなくても main は返す。
    """
    if b.d != d:
        msg = f"approximation has {b.d} coefficients, expected d={d}"
        raise LabValidationError(msg)
    main = complete_sum(b.avec, b.q) / b.q * oscillatory_integral(b.xivec, N, max_nodes)
    budget = b.q ** (1.0 - 1.0 / d) * b.D ** (1.0 / d)
    return ArcResult(main, budget, b.is_valid(N))
