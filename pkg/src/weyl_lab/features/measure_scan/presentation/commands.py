import argparse

import pandas as pd

from weyl_lab.core.domain.interval import Interval
from weyl_lab.core.domain.lab_config import LabConfig
from weyl_lab.core.errors import LabValidationError
from weyl_lab.features.measure_scan.application.counterexample import counterexample_A
from weyl_lab.features.measure_scan.application.scan import (
    DEFAULT_GRID,
    epsilon0,
    indicator_fraction,
    ladder_stats,
    moment_prediction,
)
from weyl_lab.features.measure_scan.domain.models import ScanThresholds, SumKind
from weyl_lab.presentation.components.arguments import (
    add_region,
    add_weights,
    int_list,
    region_of,
    weights_of,
)
from weyl_lab.presentation.components.command import Command, CommandOutput

DEFAULT_LADDER = [2**k for k in range(8, 14)]


def add_scan(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, required=True)
    parser.add_argument("--full", action="store_true", help="full polynomial x_1 n + ... + x_d n^d")
    parser.add_argument("--c", type=float, default=0.3)
    parser.add_argument("--C", type=float, default=4.0)
    parser.add_argument("--grid", type=int, default=DEFAULT_GRID)
    add_region(parser, "region side a,b (repeat for boxes)")
    add_weights(parser)


def _configure_eps0(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--c", type=float, required=True)
    parser.add_argument("--C", type=float, required=True)
    parser.add_argument("--alpha1", type=float, default=1.0)
    parser.add_argument("--alpha2", type=float, default=2.0)


def _eps0(args: argparse.Namespace, _config: LabConfig) -> CommandOutput:
    value = epsilon0(ScanThresholds(args.c, args.C, args.alpha1, args.alpha2))
    return CommandOutput({"epsilon0": value, "positive": value > 0})


def _configure_frac(parser: argparse.ArgumentParser) -> None:
    add_scan(parser)
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--predict", action="store_true", help="compare with moment ratios")


def _frac(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    region = region_of(args.interval)
    weights = weights_of(args, config)
    if args.predict:
        if args.full or not isinstance(region, Interval):
            msg = "--predict needs a monomial sum on a single interval"
            raise LabValidationError(msg)
        prediction = moment_prediction(
            args.d,
            weights,
            region,
            args.n,
            args.c,
            args.C,
            args.grid,
            config.seed,
            config.kernel_budget,
            config.workers,
        )
        return CommandOutput({"fraction": prediction.fraction, "prediction": prediction})

    fraction = indicator_fraction(
        SumKind(args.d, args.full),
        weights,
        region,
        args.n,
        args.c,
        args.C,
        args.grid,
        config.seed,
        config.anchor_interval,
        config.workers,
    )
    return CommandOutput({"fraction": fraction})


def _configure_ladder(parser: argparse.ArgumentParser) -> None:
    add_scan(parser)
    parser.add_argument("--ns", type=int_list, default=DEFAULT_LADDER, help="strictly increasing")


def _ladder(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    report = ladder_stats(
        SumKind(args.d, args.full),
        weights_of(args, config),
        region_of(args.interval),
        args.ns,
        args.c,
        args.C,
        args.grid,
        config.seed,
        anchor_interval=config.anchor_interval,
        workers=config.workers,
    )
    table = pd.DataFrame(
        {
            "N": report.Ns,
            "level_fraction": report.level_fractions,
            "tail_fraction": report.tail_fractions,
        }
    )
    return CommandOutput(
        {
            "union_fraction": report.union_fraction,
            "grid_size": report.grid_size,
            "predicted": report.predicted,
        },
        table,
    )


def _configure_cexa(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n-max", type=int, default=1000)
    add_region(parser, "probe interval a,b")


def _cexa(args: argparse.Namespace, _config: LabConfig) -> CommandOutput:
    probe = region_of(args.interval)
    if not isinstance(probe, Interval):
        msg = "cexA takes at most one --interval"
        raise LabValidationError(msg)
    result = counterexample_A(args.n_max, probe)
    return CommandOutput({"result": result, "scaled_density": result.scaled_density})


def commands() -> list[Command]:
    return [
        Command("eps0", "predicted shell fraction from moment ratios", _configure_eps0, _eps0),
        Command("frac", "fraction of grid points in the shell", _configure_frac, _frac),
        Command("ladder", "tail-union shell fractions along a ladder", _configure_ladder, _ladder),
        Command("cexA", "measure of the limsup counterexample set", _configure_cexa, _cexa),
    ]
