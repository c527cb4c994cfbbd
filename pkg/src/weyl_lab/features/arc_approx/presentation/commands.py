import argparse
from dataclasses import asdict

import numpy as np
import pandas as pd

from weyl_lab.core.domain.interval import Interval
from weyl_lab.core.domain.lab_config import LabConfig
from weyl_lab.core.errors import LabValidationError
from weyl_lab.features.arc_approx.application.approximations import baker_approx, vaughan_approx
from weyl_lab.features.arc_approx.application.complete_sums import (
    major_arc_direct,
    polynomial_direct,
)
from weyl_lab.features.arc_approx.application.oscillatory import (
    linear_closed_form,
    oscillatory_integral,
)
from weyl_lab.features.arc_approx.application.rational import cf_approx
from weyl_lab.features.arc_approx.application.scan import (
    PANEL_SEED,
    major_arc_panel,
    major_arc_scan,
    panel_residuals,
)
from weyl_lab.features.arc_approx.domain.models import BakerApprox, RationalApprox
from weyl_lab.presentation.components.arguments import add_region, float_list, region_of
from weyl_lab.presentation.components.command import Command, CommandOutput


def _cf(args: argparse.Namespace, _config: LabConfig) -> CommandOutput:
    r = cf_approx(args.x, args.q_max)
    return CommandOutput({"a": r.a, "q": r.q, "xi": r.xi})


def _osc(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    value = oscillatory_integral(tuple(args.xi), args.n, config.quadrature_nodes)
    outputs: dict = {"value": value, "magnitude": abs(value)}
    if len(args.xi) == 1:
        closed = linear_closed_form(args.xi[0], args.n)
        outputs["closed_form"] = closed
        outputs["error"] = abs(value - closed)
    return CommandOutput(outputs)


def _vaughan(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    r = RationalApprox(args.a, args.q, args.xi)
    approx = vaughan_approx(r, args.d, args.n, config.quadrature_nodes)
    direct = major_arc_direct(r.a, r.q, r.xi, args.d, args.n)
    return CommandOutput(
        {
            "main": approx.main,
            "error_budget": approx.error_budget,
            "direct": direct,
            "residual_ratio": abs(direct - approx.main) / approx.error_budget,
        }
    )


def _baker(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    b = BakerApprox.from_point(tuple(args.x), args.q)
    approx = baker_approx(b, b.d, args.n, config.quadrature_nodes)
    direct = polynomial_direct(b.avec, b.q, b.xivec, args.n)
    return CommandOutput(
        {
            "avec": b.avec,
            "xivec": b.xivec,
            "D": b.D,
            "valid": approx.valid,
            "main": approx.main,
            "error_budget": approx.error_budget,
            "direct": direct,
            "residual_ratio": abs(direct - approx.main) / approx.error_budget,
        }
    )


def _arcs(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    if args.panel:
        points = major_arc_panel(args.panel_seed)
        ratios = panel_residuals(points, config.workers)
        table = pd.DataFrame([asdict(p) for p in points]).assign(residual_ratio=ratios)
        return CommandOutput(
            {"points": len(points), "max_residual_ratio": max(ratios), "slack": config.arc_slack},
            table,
            failed=max(ratios) > config.arc_slack,
        )

    region = region_of(args.interval)
    if not isinstance(region, Interval) or args.grid < 1:
        msg = "arcs needs one --interval and a positive --grid"
        raise LabValidationError(msg)
    xs = np.mod(region.start + region.length * (np.arange(args.grid) + 0.5) / args.grid, 1.0)
    rows = major_arc_scan(args.d, args.n, xs.tolist(), args.q_limit, config.workers)
    table = pd.DataFrame([asdict(row) for row in rows])
    ratios = [row.residual_ratio for row in rows if row.residual_ratio is not None]
    return CommandOutput(
        {
            "points": len(rows),
            "major": sum(row.major for row in rows),
            "max_residual_ratio": max(ratios, default=None),
        },
        table,
    )


# ==========================================
#  Argument setup
# ==========================================


def _configure_cf(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--x", type=float, required=True)
    parser.add_argument("--q-max", type=int, required=True)


def _configure_osc(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--xi", type=float_list, required=True, help="xi_1,...,xi_d")
    parser.add_argument("--n", type=int, required=True)


def _configure_vaughan(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", type=int, required=True)
    parser.add_argument("--q", type=int, required=True)
    parser.add_argument("--xi", type=float, default=0.0)
    parser.add_argument("--d", type=int, required=True)
    parser.add_argument("--n", type=int, required=True)


def _configure_baker(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--x", type=float_list, required=True, help="x_1,...,x_d")
    parser.add_argument("--q", type=int, required=True)
    parser.add_argument("--n", type=int, required=True)


def _configure_arcs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, default=2)
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--grid", type=int, default=200)
    parser.add_argument("--q-limit", type=int, default=None)
    parser.add_argument("--panel", action="store_true", help="run the frozen residual panel")
    parser.add_argument("--panel-seed", type=int, default=PANEL_SEED)
    add_region(parser, "x range a,b")


def commands() -> list[Command]:
    return [
        Command("cf", "continued-fraction approximation a/q + xi", _configure_cf, _cf),
        Command("osc", "oscillatory integral int_0^N e(P(g)) dg", _configure_osc, _osc),
        Command("vaughan", "monomial major-arc approximation", _configure_vaughan, _vaughan),
        Command("baker", "polynomial major-arc approximation", _configure_baker, _baker),
        Command("arcs", "major/minor arc scan or residual panel", _configure_arcs, _arcs),
    ]
