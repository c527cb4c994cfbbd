"""
回帰パネルの判定項目。

各項目は PanelContext を受け取り、測定値と合否を Outcome で返す。
許容幅はすべて ctx.tol / ctx.in_band を通す。
"""

import math
from fractions import Fraction

import numpy as np

from weyl_lab.core.domain.interval import Interval
from weyl_lab.features.arc_approx.application.oscillatory import (
    linear_closed_form,
    oscillatory_integral,
)
from weyl_lab.features.arc_approx.application.scan import major_arc_panel, panel_residuals
from weyl_lab.features.dim_calc.application.formulas import (
    s_dim,
    s_dim_d2,
    s_half,
    u_dim,
    u_dim_d2,
)
from weyl_lab.features.dim_calc.domain.models import HALF
from weyl_lab.features.discrepancy.application.discrepancy import disc_exact, disc_oracle
from weyl_lab.features.discrepancy.application.probes import koksma_panel, ladder_panel
from weyl_lab.features.measure_scan.application.counterexample import counterexample_A
from weyl_lab.features.measure_scan.application.scan import ladder_stats, moment_prediction
from weyl_lab.features.measure_scan.domain.models import SERIES_LIMIT, SumKind
from weyl_lab.features.moment_lab.application.kernels import exact_moment
from weyl_lab.features.moment_lab.application.monte_carlo import variance_integral
from weyl_lab.features.moment_lab.application.moments import (
    fourth_moment_interval,
    second_moment_interval,
)
from weyl_lab.features.panel.domain.models import Criterion, Outcome, PanelContext
from weyl_lab.features.pattern_cantor.application.cantor import (
    cantor_build,
    cantor_dim_estimate,
    regular_cantor,
    synthetic_schedule,
)
from weyl_lab.features.pattern_cantor.application.patterns import pattern_validate
from weyl_lab.features.pattern_cantor.domain.models import (
    Clause,
    GrowthRule,
    GrowthSpec,
    Pattern,
)
from weyl_lab.features.rep_count.application.counting import (
    nondiag_profile,
    q_count,
    r_count,
    sample_shifts,
)
from weyl_lab.features.rep_count.application.spectrum import build_pair_spectrum
from weyl_lab.features.rep_count.domain.models import PairSystemQuery, RepQuery
from weyl_lab.features.weyl_core.application.phase_arith import power_frequencies
from weyl_lab.features.weyl_core.domain.models import PowerFamily, WeightSeq

PANEL_SEED = 20240917
TAXICAB_TOTAL = 284  # R_3(0, 12)
TAXICAB_NONDIAGONAL = 8
CANTOR_DEPTH = 2


def _ones_moment(ctx: PanelContext, d: int, N: int, nu: int) -> float:
    n = np.arange(1, N + 1, dtype=np.int64)
    result = exact_moment(
        power_frequencies(d, n),
        np.ones(N),
        Interval.full(),
        nu,
        ctx.config.kernel_budget,
        ctx.config.spectrum_budget,
    )
    return result.total


# ==========================================
#  Moments
# ==========================================


def check_orthogonality(ctx: PanelContext) -> Outcome:
    second = max(
        abs(_ones_moment(ctx, d, N, 1) - N) / N for d in (2, 3, 5) for N in (10, 100, 1000)
    )
    fourth = 0.0
    for d in (2, 3, 4, 5):
        for N in (10, 30, 60):
            expected = r_count(RepQuery(d, 0, N)).total
            fourth = max(fourth, abs(_ones_moment(ctx, d, N, 2) - expected) / expected)
    passed = second <= ctx.tol(1e-9) and fourth <= ctx.tol(1e-9)
    return Outcome(passed, {"second_rel_error": second, "fourth_rel_error": fourth})


def check_fourth_moment(ctx: PanelContext) -> Outcome:
    interval = Interval(0.3, 0.2)
    ratios = [
        fourth_moment_interval(5, WeightSeq.ones(), interval, N, ctx.config.kernel_budget).ratio
        for N in (80, 120, 160)
    ]
    deviations = [abs(r - 1.0) for r in ratios if r is not None]
    passed = (
        len(deviations) == len(ratios)
        and all(ctx.in_band(r, 0.8, 1.2) for r in ratios if r is not None)
        and all(b <= a for a, b in zip(deviations, deviations[1:], strict=False))
    )
    return Outcome(passed, {"N": [80, 120, 160], "ratios": ratios})


def check_second_moment(ctx: PanelContext) -> Outcome:
    rng = np.random.default_rng(PANEL_SEED)
    ratios = []
    for _ in range(5):
        length = float(rng.uniform(0.05, 0.3))
        start = float(rng.uniform(0.0, 1.0 - length))
        result = second_moment_interval(
            PowerFamily(3),
            WeightSeq.ones(),
            Interval(start, length),
            2000,
            budget=ctx.config.kernel_budget,
        )
        ratios.append(result.ratio)
    passed = all(r is not None and ctx.in_band(r, 0.95, 1.05) for r in ratios)
    return Outcome(passed, {"ratios": ratios})


def check_variance(ctx: PanelContext) -> Outcome:
    values, bounds = [], []
    for N in (256, 512):
        eps0 = float(N) ** (-3 + 0.5 + 0.1)
        result = variance_integral(3.0, WeightSeq.ones(), 0.2, 0.01, eps0, N, 64, PANEL_SEED)
        values.append(result.value)
        bounds.append(10 * float(N) ** (-3 + 0.2) * (0.01 + 1 / N))
    passed = all(v <= ctx.tol(b) for v, b in zip(values, bounds, strict=True))
    passed = passed and values[1] < values[0]
    return Outcome(passed, {"N": [256, 512], "values": values, "bounds": bounds})


# ==========================================
#  Counting
# ==========================================


def _brute_counts(d: int, N: int, ks: list[int]) -> dict[int, int]:
    n = np.arange(1, N + 1, dtype=np.int64)
    sums = (n[:, None] ** d + n[None, :] ** d).ravel()
    diff = sums[:, None] - sums[None, :]
    return {k: int(np.count_nonzero(diff == k)) for k in ks}


def check_counting(ctx: PanelContext) -> Outcome:
    mismatches = []
    for N in (12, 40):
        spectrum = build_pair_spectrum(3, N, ctx.config.spectrum_budget)
        ks = [0, 1, -1, 7, -7, *sample_shifts(3, N, 6, PANEL_SEED, extra=(1728, 1729, 1730))]
        for k, expected in _brute_counts(3, N, ks).items():
            if r_count(RepQuery(3, k, N), spectrum).total != expected:
                mismatches.append((N, k))

    taxicab = r_count(RepQuery(3, 0, 12))
    quadratic_ok = all(
        q_count(PairSystemQuery(0, 0, N), ctx.config.spectrum_budget).total == 2 * N * N - N
        for N in (10, 100, 500)
    )
    passed = (
        not mismatches
        and taxicab.total == TAXICAB_TOTAL
        and taxicab.nondiagonal == TAXICAB_NONDIAGONAL
        and quadratic_ok
    )
    return Outcome(
        passed,
        {"mismatches": mismatches, "R3_0_12": taxicab.total, "nondiagonal": taxicab.nondiagonal},
    )


def check_nondiagonal_exponents(ctx: PanelContext) -> Outcome:
    cases = [
        (5, 200, (), 1 + 2 / math.sqrt(5)),
        (3, 500, (1728, 1729, 1730), 11 / 6),
    ]
    measured, passed = {}, True
    for d, N, extra, limit in cases:
        shifts = sample_shifts(d, N, 32, PANEL_SEED, extra, ctx.config.spectrum_budget)
        profile = nondiag_profile(d, N, shifts, ctx.workers, ctx.config.spectrum_budget)
        measured[f"d{d}_N{N}"] = profile.exponent
        if profile.exponent is not None and profile.exponent > limit + ctx.tol(0.3):
            passed = False
    return Outcome(passed, measured)


# ==========================================
#  Arcs / dimensions / discrepancy
# ==========================================


def check_major_arcs(ctx: PanelContext) -> Outcome:
    residuals = panel_residuals(major_arc_panel(), ctx.workers)
    rng = np.random.default_rng(PANEL_SEED)
    worst = 0.0
    for _ in range(100):
        t = float(rng.uniform(-1.0, 1.0))
        N = int(rng.integers(100, 10_001))
        value = oscillatory_integral((t,), N, ctx.config.quadrature_nodes)
        worst = max(worst, abs(value - linear_closed_form(t, N)) / N)
    passed = max(residuals) <= ctx.tol(ctx.config.arc_slack) and worst <= ctx.tol(1e-6)
    return Outcome(passed, {"max_residual": max(residuals), "linear_error_per_N": worst})


def check_dimensions(ctx: PanelContext) -> Outcome:
    exact = s_dim(2, HALF) == u_dim(2, HALF) == 2 and s_dim(2, 1) == u_dim(2, 1) == 0
    grid = [Fraction(50 + i, 100) for i in range(51)]
    piecewise = max(
        max(abs(s_dim(2, a) - s_dim_d2(a)), abs(u_dim(2, a) - u_dim_d2(a))) for a in grid
    )
    strict = all(s_dim(2, a) < u_dim(2, a) for a in grid[1:-1])
    half_u = all(u_dim(d, HALF) == d for d in range(2, 13))
    ratio = float(s_half(10**4)) / math.sqrt(2 * 10**4)
    passed = (
        exact
        and piecewise <= ctx.tol(1e-12)
        and strict
        and half_u
        and ctx.in_band(ratio, 0.98, 1.05)
    )
    return Outcome(
        passed,
        {"piecewise_error": float(piecewise), "s_half_ratio": ratio, "strict": strict},
    )


def check_discrepancy(ctx: PanelContext) -> Outcome:
    worst = 0.0
    for seed in range(32):
        rng = np.random.default_rng(seed)
        points = rng.random(int(rng.integers(1, 301)))
        worst = max(worst, abs(disc_exact(points).value - disc_oracle(points)))
    ratios = [p.ratio for p in koksma_panel(workers=ctx.workers)]
    shadow = ladder_panel(workers=ctx.workers)
    passed = worst <= ctx.tol(1e-9) and max(ratios) <= ctx.tol(10.0)
    return Outcome(
        passed,
        {"oracle_error": worst, "koksma_max_ratio": max(ratios), "ladder_fraction": shadow},
    )


# ==========================================
#  Cantor / measure
# ==========================================


FIGURE_CELLS = (0, 1, 3, 4, 6, 7)


def _figure_members() -> list[Interval]:
    """[0,1) の 8 分割のうち 6 セルに長さ 0.05 の区間"""
    return [Interval(c / 8 + 0.03, 0.05) for c in FIGURE_CELLS]


def _mutations() -> dict[Clause, list[Interval]]:
    longer = _figure_members()
    longer[0] = Interval(0.01, 0.1)
    shared = _figure_members()
    shared[0], shared[1] = Interval(0.01, 0.05), Interval(0.07, 0.05)
    crossing = _figure_members()
    crossing[2] = Interval(0.36, 0.05)
    return {Clause.LENGTH: longer, Clause.SHARED_CELL: shared, Clause.CONTAINMENT: crossing}


def _figure_report(members: list[Interval]) -> set[Clause]:
    return pattern_validate(Pattern(Interval.full(), 8, 0.05, tuple(members))).clauses()


def check_cantor(ctx: PanelContext) -> Outcome:
    figure_ok = not _figure_report(_figure_members())
    rejected = [_figure_report(m) == {clause} for clause, m in _mutations().items()]

    thirds = cantor_dim_estimate(regular_cantor(3, (0, 2), 6))
    fast = GrowthSpec(3.0, 0.1, rule=GrowthRule.POWER, power=8.0)
    synthetic = cantor_dim_estimate(synthetic_schedule(fast, 4))
    squaring = cantor_dim_estimate(synthetic_schedule(GrowthSpec(3.0, 0.1, initial=32), 4))
    limit = (3.0 - 0.5 - 0.1) / (3.0 + 0.1)

    growth = GrowthSpec(3.0, 0.1, rule=GrowthRule.EXPLICIT, scales=(5, 256))
    build = cantor_build(
        growth, WeightSeq.ones(), Interval.full(), CANTOR_DEPTH, ctx.config.c0, workers=ctx.workers
    )
    deepest = build.levels[-1]
    endpoint_ratios = [r.min_endpoint_ratio for r in build.stability]
    stable = len(build.stability) == CANTOR_DEPTH and all(r.stable for r in build.stability)

    passed = (
        figure_ok
        and all(rejected)
        and ctx.within(thirds, math.log(2) / math.log(3), 1e-9)
        and ctx.within(synthetic, limit, 0.1)
        and not build.truncated
        and deepest.k == CANTOR_DEPTH
        and stable
    )
    return Outcome(
        passed,
        {
            "middle_thirds": thirds,
            "power8_estimate": synthetic,
            "squaring_estimate": squaring,
            "levels": [(lv.N_k, lv.M_k, lv.delta_k) for lv in build.levels],
            "endpoint_ratios": endpoint_ratios,
        },
    )


def check_measure(ctx: PanelContext) -> Outcome:
    ladder = [2**k for k in range(8, 14)]
    report = ladder_stats(
        SumKind(3),
        WeightSeq.ones(),
        Interval.full(),
        ladder,
        0.3,
        4.0,
        grid=2048,
        seed=PANEL_SEED,
        workers=ctx.workers,
    )
    bound = counterexample_A(1000, Interval.full()).measure_bound
    prediction = moment_prediction(
        3,
        WeightSeq.ones(),
        Interval(0.3, 0.2),
        60,
        0.25,
        2.0,
        2000,
        PANEL_SEED,
        ctx.config.kernel_budget,
        ctx.workers,
    )
    passed = (
        report.union_fraction >= 1.0 - ctx.tol(0.1)
        and ctx.within(bound, SERIES_LIMIT, 1e-3)
        and prediction.fraction >= prediction.epsilon0 - ctx.tol(0.05)
    )
    return Outcome(
        passed,
        {
            "union_fraction": report.union_fraction,
            "tail_fractions": report.tail_fractions,
            "measure_bound": bound,
            "epsilon0": prediction.epsilon0,
            "fraction": prediction.fraction,
        },
    )


CRITERIA = (
    Criterion(
        "orthogonality",
        "moments",
        "full-period moments equal N and R_d(0, N)",
        check_orthogonality,
    ),
    Criterion("counting", "counting", "spectrum counts match brute force", check_counting),
    Criterion("fourth-moment", "moments", "d=5 fourth moment ratio near 1", check_fourth_moment),
    Criterion("second-moment", "moments", "d=3 second moment ratio near 1", check_second_moment),
    Criterion(
        "nondiagonal", "counting", "non-diagonal count exponents", check_nondiagonal_exponents
    ),
    Criterion(
        "major-arcs", "arcs", "Vaughan residuals and closed-form integrals", check_major_arcs
    ),
    Criterion("dims", "dims", "dimension calculators", check_dimensions),
    Criterion(
        "discrepancy", "discrepancy", "exact discrepancy and Koksma ratios", check_discrepancy
    ),
    Criterion("cantor", "cantor", "patterns, Cantor builds and dimension estimates", check_cantor),
    Criterion("measure", "measure", "ladder unions and the counterexample set", check_measure),
    Criterion("variance", "variance", "variance decay for gamma = 3", check_variance),
)
