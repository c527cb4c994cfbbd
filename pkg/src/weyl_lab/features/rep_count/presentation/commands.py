import argparse

import pandas as pd

from weyl_lab.core.domain.lab_config import LabConfig
from weyl_lab.features.rep_count.application.counting import (
    full_nondiag_profile,
    nondiag_profile,
    power_pair_count,
    q_count,
    r_count,
    sample_shifts,
)
from weyl_lab.features.rep_count.domain.models import PairSystemQuery, RepCount, RepQuery
from weyl_lab.presentation.components.arguments import int_list
from weyl_lab.presentation.components.command import Command, CommandOutput


def _count_outputs(count: RepCount) -> dict:
    return {"total": count.total, "diagonal": count.diagonal, "nondiagonal": count.nondiagonal}


def _repcount(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    count = r_count(RepQuery(args.d, args.k, args.n), spectrum_budget=config.spectrum_budget)
    return CommandOutput(_count_outputs(count))


def _qcount(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    count = q_count(PairSystemQuery(args.k, args.m, args.n), config.spectrum_budget)
    return CommandOutput(_count_outputs(count))


def _powerpairs(args: argparse.Namespace, _config: LabConfig) -> CommandOutput:
    found = power_pair_count(args.d, args.k, args.n)
    return CommandOutput({"count": found.count, "pairs": found.pairs})


def _profile(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    if args.exhaustive:
        profile = full_nondiag_profile(args.d, args.n, config.spectrum_budget)
    else:
        shifts = sample_shifts(
            args.d,
            args.n,
            args.samples,
            config.seed,
            args.shifts or (),
            config.spectrum_budget,
        )
        profile = nondiag_profile(args.d, args.n, shifts, config.workers, config.spectrum_budget)
    table = pd.DataFrame({"k": profile.shifts, "count": profile.counts})
    return CommandOutput(
        {
            "max_count": profile.max_count,
            "argmax_shift": profile.argmax_shift,
            "exponent": profile.exponent,
            "shifts": len(profile.shifts),
        },
        table,
    )


# ==========================================
#  Argument setup
# ==========================================


def _configure_repcount(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, required=True)
    parser.add_argument("--k", type=int, default=0)
    parser.add_argument("--n", type=int, required=True)


def _configure_qcount(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=int, default=0, help="linear shift")
    parser.add_argument("--m", type=int, default=0, help="quadratic shift")
    parser.add_argument("--n", type=int, required=True)


def _configure_powerpairs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, required=True)
    parser.add_argument("--k", type=int, required=True)
    parser.add_argument("--n", type=int, required=True)


def _configure_profile(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, required=True)
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--samples", type=int, default=64, help="number of sampled shifts")
    parser.add_argument("--shifts", type=int_list, default=None, help="extra shifts k")
    parser.add_argument(
        "--exhaustive", action="store_true", help="count every nonzero shift instead of sampling"
    )


def commands() -> list[Command]:
    return [
        Command("repcount", "count n1^d+n2^d-n3^d-n4^d = k", _configure_repcount, _repcount),
        Command("qcount", "count the linear/quadratic pair system", _configure_qcount, _qcount),
        Command("powerpairs", "solve m^d = n^d + k", _configure_powerpairs, _powerpairs),
        Command("profile", "non-diagonal count profile", _configure_profile, _profile),
    ]
