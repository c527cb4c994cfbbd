import argparse

import pandas as pd

from weyl_lab.core.domain.interval import Interval
from weyl_lab.core.domain.lab_config import LabConfig
from weyl_lab.core.errors import LabValidationError
from weyl_lab.features.pattern_cantor.application.cantor import (
    cantor_build,
    cantor_dim_estimate,
    mass_check,
    regular_cantor,
    synthetic_schedule,
)
from weyl_lab.features.pattern_cantor.application.patterns import (
    endpoint_stability,
    large_value_intervals,
    pattern_validate,
)
from weyl_lab.features.pattern_cantor.domain.models import CantorLevel, GrowthRule, GrowthSpec
from weyl_lab.presentation.components.arguments import (
    add_region,
    add_weights,
    float_list,
    int_list,
    region_of,
    weights_of,
)
from weyl_lab.presentation.components.command import Command, CommandOutput


def add_growth(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gamma", type=float, required=True)
    parser.add_argument("--tau", type=float, required=True)
    parser.add_argument(
        "--rule", choices=[r.name.lower() for r in GrowthRule], default="square"
    )
    parser.add_argument("--initial", type=int, default=32, help="first scale L_1")
    parser.add_argument("--power", type=float, default=2.0, help="exponent of the power rule")
    parser.add_argument("--scales", type=int_list, default=(), help="explicit scales L_k")


def growth_of(args: argparse.Namespace) -> GrowthSpec:
    return GrowthSpec(
        args.gamma,
        args.tau,
        GrowthRule[args.rule.upper()],
        args.initial,
        args.power,
        tuple(args.scales),
    )


def _single_interval(intervals: list[Interval] | None) -> Interval:
    region = region_of(intervals)
    if not isinstance(region, Interval):
        msg = "this subcommand takes at most one --interval"
        raise LabValidationError(msg)
    return region


def level_table(levels: list[CantorLevel] | tuple[CantorLevel, ...]) -> pd.DataFrame:
    """段ごとの要約 (左端の一覧は含めない)"""
    return pd.DataFrame(
        {
            "k": [lv.k for lv in levels],
            "L": [lv.L_k for lv in levels],
            "N": [lv.N_k for lv in levels],
            "M": [lv.M_k for lv in levels],
            "delta": [lv.delta_k for lv in levels],
            "count": [lv.count for lv in levels],
        }
    )


# ==========================================
#  pattern
# ==========================================


def _configure_pattern(parser: argparse.ArgumentParser) -> None:
    add_growth(parser)
    parser.add_argument("--n", type=int, required=True, help="scale L")
    parser.add_argument("--c0", type=float, default=None)
    parser.add_argument("--stability", action="store_true", help="re-evaluate member endpoints")
    add_region(parser, "parent interval a,b")
    add_weights(parser)


def _pattern(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    g = growth_of(args)
    weights = weights_of(args, config)
    c0 = config.c0 if args.c0 is None else args.c0
    pattern = large_value_intervals(
        g,
        weights,
        _single_interval(args.interval),
        args.n,
        c0,
        config.anchor_interval,
        config.workers,
        config.kernel_budget,
    )
    report = pattern_validate(pattern)
    outputs = {
        "M": pattern.M,
        "N": pattern.N,
        "delta": pattern.delta,
        "valid": report.valid,
        "violations": [v.detail for v in report.violations],
    }
    if args.stability:
        outputs["stability"] = endpoint_stability(
            [pattern], g.gamma, weights, args.n, c0, config.anchor_interval, config.workers
        )
    table = pd.DataFrame(
        {
            "start": [m.start for m in pattern.members],
            "center": [w.center for w in pattern.witnesses],
            "value": list(pattern.values),
        }
    )
    return CommandOutput(outputs, table)


# ==========================================
#  cantor
# ==========================================


def _configure_cantor(parser: argparse.ArgumentParser) -> None:
    add_growth(parser)
    parser.add_argument("--depth", type=int, default=2)
    parser.add_argument("--c0", type=float, default=None)
    parser.add_argument(
        "--no-stability", action="store_true", help="skip the endpoint re-evaluation"
    )
    add_region(parser, "root interval a,b")
    add_weights(parser)


def _cantor(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    build = cantor_build(
        growth_of(args),
        weights_of(args, config),
        _single_interval(args.interval),
        args.depth,
        config.c0 if args.c0 is None else args.c0,
        config.anchor_interval,
        config.workers,
        config.kernel_budget,
        not args.no_stability,
    )
    deepest = build.levels[-1]
    outputs = {
        "depth": deepest.k,
        "intervals": deepest.count,
        "truncated": build.truncated,
        "report": build.report,
        "patterns": build.patterns,
        "stability": build.stability,
        "stable": all(r.stable for r in build.stability),
        "dim_estimate": cantor_dim_estimate(build.levels) if deepest.k > 0 else None,
    }
    return CommandOutput(outputs, level_table(build.levels))


# ==========================================
#  dimest / mass
# ==========================================


def _configure_dimest(parser: argparse.ArgumentParser) -> None:
    add_growth(parser)
    parser.add_argument("--levels", type=int, default=4)


def _dimest(args: argparse.Namespace, _config: LabConfig) -> CommandOutput:
    g = growth_of(args)
    schedule = synthetic_schedule(g, args.levels)
    table = pd.DataFrame([vars(level) for level in schedule])
    return CommandOutput(
        {
            "estimate": cantor_dim_estimate(schedule),
            "reference": (g.gamma - 0.5 - g.tau) / (g.gamma + g.tau),
        },
        table,
    )


def _configure_mass(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--cells", type=int, default=3)
    parser.add_argument("--kept", type=int_list, default=[0, 2])
    parser.add_argument("--depth", type=int, default=6)
    parser.add_argument("--t", type=float, required=True, help="exponent t < dimension")
    parser.add_argument("--radii", type=float_list, default=None)


def _mass(args: argparse.Namespace, _config: LabConfig) -> CommandOutput:
    levels = regular_cantor(args.cells, args.kept, args.depth)
    radii = args.radii or [float(args.cells) ** -k for k in range(1, args.depth + 1)]
    rows = mass_check(levels, radii, args.t)
    table = pd.DataFrame([vars(row) for row in rows])
    return CommandOutput(
        {
            "dim_estimate": cantor_dim_estimate(levels) if args.depth > 0 else None,
            "max_ratio": max(row.ratio for row in rows),
        },
        table,
    )


def commands() -> list[Command]:
    return [
        Command("pattern", "large-value interval pattern", _configure_pattern, _pattern),
        Command("cantor", "nested large-value Cantor build", _configure_cantor, _cantor),
        Command("dimest", "dimension of a synthetic schedule", _configure_dimest, _dimest),
        Command("mass", "mass distribution check on a regular Cantor set", _configure_mass, _mass),
    ]
