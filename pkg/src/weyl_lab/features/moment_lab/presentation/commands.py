import argparse

from weyl_lab.core.domain.interval import Box, Interval
from weyl_lab.core.domain.lab_config import LabConfig
from weyl_lab.core.errors import LabValidationError
from weyl_lab.features.moment_lab.application.moments import (
    fourth_moment_interval,
    quadratic_pair_moment,
    second_moment_interval,
)
from weyl_lab.features.moment_lab.application.monte_carlo import mc_moment, variance_integral
from weyl_lab.features.moment_lab.domain.models import MomentResult, SumRange
from weyl_lab.features.weyl_core.domain.models import PowerFamily
from weyl_lab.presentation.components.arguments import (
    add_region,
    add_weights,
    region_of,
    weights_of,
)
from weyl_lab.presentation.components.command import Command, CommandOutput


def _moment_outputs(result: MomentResult) -> dict:
    return {
        "total": result.total,
        "diagonal_M": result.diagonal_M,
        "offdiag_E": result.offdiag_E,
        "ratio": result.ratio,
        "distinct": result.distinct,
        "delta": result.delta,
    }


def _single_interval(intervals: list[Interval] | None) -> Interval:
    region = region_of(intervals)
    if not isinstance(region, Interval):
        msg = "this subcommand takes exactly one --interval"
        raise LabValidationError(msg)
    return region


# ==========================================
#  moment2
# ==========================================


def _configure_moment2(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gamma", type=float, required=True, help="f(n) = n^gamma")
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument(
        "--range", choices=[r.value for r in SumRange], default=SumRange.INITIAL.value
    )
    parser.add_argument("--mc-samples", type=int, default=None, help="also run Monte Carlo")
    add_region(parser, "integration interval a,b")
    add_weights(parser)


def _moment2(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    family = PowerFamily(args.gamma)
    interval = _single_interval(args.interval)
    weights = weights_of(args, config)
    result = second_moment_interval(
        family, weights, interval, args.n, SumRange(args.range), config.kernel_budget
    )
    outputs = _moment_outputs(result)
    if args.mc_samples is not None:
        if SumRange(args.range) is not SumRange.INITIAL:
            msg = "--mc-samples supports the initial range 1..N only"
            raise LabValidationError(msg)
        outputs["monte_carlo"] = mc_moment(
            family, weights, interval, args.n, 1, args.mc_samples, config.seed, config.workers
        )
    return CommandOutput(outputs)


# ==========================================
#  moment4
# ==========================================


def _configure_moment4(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, required=True)
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--mc-samples", type=int, default=None, help="also run Monte Carlo")
    add_region(parser, "integration interval a,b")
    add_weights(parser)


def _moment4(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    interval = _single_interval(args.interval)
    weights = weights_of(args, config)
    result = fourth_moment_interval(args.d, weights, interval, args.n, config.kernel_budget)
    outputs = _moment_outputs(result)
    if args.mc_samples is not None:
        outputs["monte_carlo"] = mc_moment(
            PowerFamily(args.d),
            weights,
            interval,
            args.n,
            2,
            args.mc_samples,
            config.seed,
            config.workers,
        )
    return CommandOutput(outputs)


# ==========================================
#  momentq (x_1 n + x_2 n^2)
# ==========================================


def _configure_momentq(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, required=True)
    add_region(parser, "box side a,b (give twice: x_1 then x_2)")
    add_weights(parser)


def _momentq(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    region = region_of(args.interval)
    if not isinstance(region, Box):
        msg = "momentq needs two --interval sides"
        raise LabValidationError(msg)
    result = quadratic_pair_moment(
        region, weights_of(args, config), args.n, config.kernel_budget, config.spectrum_budget
    )
    return CommandOutput(_moment_outputs(result))


# ==========================================
#  variance
# ==========================================


def _configure_variance(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gamma", type=float, required=True)
    parser.add_argument("--x1", type=float, required=True)
    parser.add_argument("--eps1", type=float, required=True)
    parser.add_argument("--eps0", type=float, required=True)
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--samples", type=int, default=256)
    add_weights(parser)


def _variance(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    result = variance_integral(
        args.gamma,
        weights_of(args, config),
        args.x1,
        args.eps1,
        args.eps0,
        args.n,
        args.samples,
        config.seed,
        config.kernel_budget,
    )
    return CommandOutput(
        {
            "value": result.value,
            "stderr": result.stderr,
            "reference": result.reference,
            "M": result.M,
            "samples": result.samples,
        }
    )


def commands() -> list[Command]:
    return [
        Command("moment2", "exact second moment over an interval", _configure_moment2, _moment2),
        Command("moment4", "exact fourth moment of x n^d", _configure_moment4, _moment4),
        Command("momentq", "fourth moment of x1 n + x2 n^2", _configure_momentq, _momentq),
        Command("variance", "variance integral estimate", _configure_variance, _variance),
    ]
