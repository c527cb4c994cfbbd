import argparse
from dataclasses import asdict

import pandas as pd

from weyl_lab.core.domain.lab_config import LabConfig
from weyl_lab.features.panel.application.runner import run_panel
from weyl_lab.features.panel.domain.models import PanelContext
from weyl_lab.presentation.components.command import Command, CommandOutput


def _configure_panel(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--only", action="append", default=None, help="criterion or group name (repeatable)"
    )
    parser.add_argument(
        "--tolerance-scale", type=float, default=1.0, help="multiplies every tolerance band"
    )


def _panel(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    summary = run_panel(PanelContext(config, args.tolerance_scale), args.only)
    rows = [
        {k: v for k, v in asdict(r).items() if k != "measured"} for r in summary.results
    ]
    return CommandOutput(
        {
            "passed": summary.passed,
            "failures": summary.failures,
            "criteria": {r.name: asdict(r) for r in summary.results},
        },
        pd.DataFrame(rows),
        failed=not summary.passed,
    )


def commands() -> list[Command]:
    return [
        Command(
            "panel",
            "run the regression panel",
            _configure_panel,
            _panel,
            major_update=True,
        )
    ]
