import argparse
from dataclasses import asdict

import pandas as pd

from weyl_lab.core.domain.lab_config import LabConfig
from weyl_lab.core.errors import LabValidationError
from weyl_lab.features.discrepancy.application.discrepancy import disc_for_phase
from weyl_lab.features.discrepancy.application.probes import (
    KOKSMA_PANEL_SEED,
    disc_ladder,
    koksma_panel,
    koksma_probe,
)
from weyl_lab.features.weyl_core.domain.models import PhaseVector
from weyl_lab.presentation.components.arguments import float_list, int_list
from weyl_lab.presentation.components.command import Command, CommandOutput


def _disc(args: argparse.Namespace, _config: LabConfig) -> CommandOutput:
    x = PhaseVector(tuple(args.x))
    result = disc_for_phase(x, args.n, args.verify)
    outputs = {"value": result.value, "a": result.a, "b": result.b, "N": result.N}
    table = None
    if args.ladder:
        ladder = disc_ladder(x, args.ladder)
        table = pd.DataFrame([asdict(p) for p in ladder])
        outputs["ladder_min_normalized"] = min(p.normalized for p in ladder)
    return CommandOutput(outputs, table)


def _koksma(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    if args.x is not None:
        probe = koksma_probe(PhaseVector(tuple(args.x)), args.n)
        return CommandOutput(asdict(probe))
    if args.d is None:
        msg = "koksma needs --x for a single probe or --d for a panel"
        raise LabValidationError(msg)
    probes = koksma_panel(args.d, args.n, args.count, args.panel_seed, config.workers)
    table = pd.DataFrame([asdict(p) for p in probes])
    return CommandOutput(
        {"count": len(probes), "max_ratio": max(p.ratio for p in probes)}, table
    )


def _configure_disc(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--x", type=float_list, required=True, help="x_1,...,x_d")
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--verify", action="store_true", help="cross-check with the oracle")
    parser.add_argument("--ladder", type=int_list, default=None, help="D/sqrt(N) along N")


def _configure_koksma(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--x", type=float_list, default=None)
    parser.add_argument("--d", type=int, default=None, help="panel degree")
    parser.add_argument("--n", type=int, default=10_000)
    parser.add_argument("--count", type=int, default=50)
    parser.add_argument("--panel-seed", type=int, default=KOKSMA_PANEL_SEED)


def commands() -> list[Command]:
    return [
        Command("disc", "exact discrepancy of x_1 n + ... + x_d n^d", _configure_disc, _disc),
        Command("koksma", "|S| / D ratio probe or panel", _configure_koksma, _koksma),
    ]
