import argparse
from fractions import Fraction

from weyl_lab.core.domain.lab_config import LabConfig
from weyl_lab.features.dim_calc.application.formulas import (
    dim_report,
    jb_dim,
    jb_kappa,
    mean_value_exponent,
    theorem_bounds,
)
from weyl_lab.presentation.components.arguments import fraction
from weyl_lab.presentation.components.command import Command, CommandOutput


def _exact(value: float | Fraction) -> str:
    return str(value) if isinstance(value, Fraction) else repr(value)


def _configure_dims(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, required=True)
    parser.add_argument("--alpha", type=fraction, required=True, help="alpha in [1/2, 1]")
    parser.add_argument("--eps", type=fraction, default=Fraction(0), help="JB slack epsilon")
    parser.add_argument("--gamma", type=fraction, default=None, help="also report bounds")


def _dims(args: argparse.Namespace, _config: LabConfig) -> CommandOutput:
    report = dim_report(args.d, args.alpha)
    outputs = {
        "s": report.s,
        "u": report.u,
        "monomial": report.monomial,
        "s_exact": _exact(report.s),
        "u_exact": _exact(report.u),
        "boundary_alpha": report.boundary_alpha,
        "mean_value_exponent": mean_value_exponent(args.d),
    }
    if args.alpha < 1:
        kappa = jb_kappa(args.d, args.alpha, args.eps)
        outputs["jb_kappa"] = kappa
        outputs["jb_dim"] = jb_dim(kappa)
    if args.gamma is not None:
        bounds = theorem_bounds(args.gamma)
        outputs["thmf"] = bounds.thmf
        outputs["thmd2"] = bounds.thmd2
    return CommandOutput(outputs)


def commands() -> list[Command]:
    return [Command("dims", "exact dimension formulas s, u", _configure_dims, _dims)]
