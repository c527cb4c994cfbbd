import math
from collections.abc import Sequence

import numpy as np

from weyl_lab.core import console
from weyl_lab.core.errors import LabValidationError
from weyl_lab.core.services.parallel import partitioned_map
from weyl_lab.features.arc_approx.application.approximations import vaughan_approx
from weyl_lab.features.arc_approx.application.complete_sums import major_arc_direct
from weyl_lab.features.arc_approx.application.rational import cf_approx
from weyl_lab.features.arc_approx.domain.models import PanelPoint, RationalApprox, ScanRow

PANEL_SEED = 20240917
PANEL_SIZE = 50
PANEL_N = 10_000
PANEL_DEGREES = (2, 3, 5)
PANEL_Q_MAX = 50


def default_q_limit(N: int) -> int:
    return max(2, math.isqrt(N))


def _scan_point(x: float, d: int, N: int, q_limit: int) -> ScanRow:
    r = cf_approx(x, q_limit)
    major = r.q <= q_limit and abs(r.xi) <= q_limit / float(N) ** d
    direct = major_arc_direct(r.a, r.q, r.xi, d, N)
    if not major:
        return ScanRow(x, r.a, r.q, r.xi, major=False, direct=abs(direct))
    approx = vaughan_approx(r, d, N)
    return ScanRow(
        x,
        r.a,
        r.q,
        r.xi,
        major=True,
        direct=abs(direct),
        main=abs(approx.main),
        residual_ratio=abs(direct - approx.main) / approx.error_budget,
    )


def major_arc_scan(
    d: int, N: int, xs: Sequence[float], q_limit: int | None = None, workers: int = 1
) -> list[ScanRow]:
    """格子点ごとに主弧/副弧を判定し、主弧では Vaughan の近似との残差比を測る"""
    limit = default_q_limit(N) if q_limit is None else q_limit
    if limit < 2:  # noqa: PLR2004
        msg = f"q_limit must be >= 2, got {limit}"
        raise LabValidationError(msg)

    def run(block: Sequence[float]) -> list[ScanRow]:
        return [_scan_point(float(x), d, N, limit) for x in block]

    rows = partitioned_map(run, list(xs), workers)
    majors = sum(row.major for row in rows)
    console.info(f"major arc scan d={d} N={N} q<={limit}: {majors}/{len(rows)} major")
    return rows


def major_arc_panel(
    seed: int = PANEL_SEED,
    count: int = PANEL_SIZE,
    N: int = PANEL_N,
    degrees: Sequence[int] = PANEL_DEGREES,
    q_max: int = PANEL_Q_MAX,
) -> list[PanelPoint]:
    """固定シードの主弧点 (q <= q_max, |xi| <= 0.5 N^{-d})"""
    rng = np.random.default_rng(seed)
    points: list[PanelPoint] = []
    for i in range(count):
        d = degrees[i % len(degrees)]
        q = int(rng.integers(1, q_max + 1))
        a = 0
        if q > 1:
            a = int(rng.integers(1, q))
            while math.gcd(a, q) != 1:
                a = int(rng.integers(1, q))
        xi = float(rng.uniform(-0.5, 0.5)) * float(N) ** (-d)
        points.append(PanelPoint(d, a, q, xi, N))
    return points


def panel_residuals(points: Sequence[PanelPoint], workers: int = 1) -> list[float]:
    """|direct - main| / error_budget"""

    def run(block: Sequence[PanelPoint]) -> list[float]:
        out = []
        for p in block:
            approx = vaughan_approx(RationalApprox(p.a, p.q, p.xi), p.d, p.N)
            direct = major_arc_direct(p.a, p.q, p.xi, p.d, p.N)
            out.append(abs(direct - approx.main) / approx.error_budget)
        return out

    return partitioned_map(run, list(points), workers)
