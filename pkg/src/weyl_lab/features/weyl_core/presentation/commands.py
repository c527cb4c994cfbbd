import argparse
import math

import numpy as np
import pandas as pd

from weyl_lab.core.domain.interval import Interval
from weyl_lab.core.domain.lab_config import LabConfig
from weyl_lab.core.errors import LabValidationError
from weyl_lab.features.weyl_core.application.batch import batch_eval
from weyl_lab.features.weyl_core.application.evaluator import flat_sum_demo, prefix_max, weyl_sum
from weyl_lab.features.weyl_core.domain.models import (
    MonomialPhase,
    Phase,
    PhaseVector,
    PowerFamily,
)
from weyl_lab.presentation.components.arguments import (
    add_region,
    add_weights,
    float_list,
    region_of,
    weights_of,
)
from weyl_lab.presentation.components.command import Command, CommandOutput


def phase_of(x: list[float], d: int | None, gamma: float | None) -> Phase:
    """--gamma なら x n^gamma、係数1つで d > 1 なら単項式、それ以外は係数ベクトル"""
    if gamma is not None:
        return PowerFamily(gamma).phase(x[0])
    if len(x) == 1 and d is not None and d > 1:
        return MonomialPhase(x[0], d)
    if d is not None and d != len(x):
        msg = f"--d {d} does not match {len(x)} coefficients"
        raise LabValidationError(msg)
    return PhaseVector(tuple(x))


# ==========================================
#  eval
# ==========================================


def _configure_eval(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--x", type=float_list, required=True, help="coefficients x_1,...,x_d")
    parser.add_argument("--d", type=int, default=None)
    parser.add_argument("--gamma", type=float, default=None, help="evaluate x n^gamma")
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--prefix", action="store_true", help="also report max_M |S(M)|")
    add_weights(parser)


def _eval(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    phase = phase_of(args.x, args.d, args.gamma)
    weights = weights_of(args, config)
    result = weyl_sum(phase, weights, args.n)
    outputs = {
        "value": result.value,
        "magnitude": result.magnitude,
        "normalized": result.magnitude / math.sqrt(args.n) if args.n else 0.0,
        "n_terms": result.n_terms,
    }
    if args.prefix:
        peak = prefix_max(phase, weights, args.n)
        outputs["prefix_max"] = peak.value
        outputs["prefix_argmax"] = peak.argmax
    return CommandOutput(outputs)


# ==========================================
#  batch
# ==========================================


def _configure_batch(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, required=True)
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--grid", type=int, default=256, help="number of points")
    add_region(parser, "x range a,b (monomial x n^d)")
    add_weights(parser)


def _batch(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    region = region_of(args.interval)
    if args.grid < 1 or not isinstance(region, Interval):
        msg = "batch needs a positive grid size and a single interval"
        raise LabValidationError(msg)
    xs = region.start + region.length * (np.arange(args.grid) + 0.5) / args.grid
    grid = [MonomialPhase(float(x) % 1.0, args.d) for x in xs]
    values = batch_eval(
        grid, weights_of(args, config), args.n, config.anchor_interval, config.workers
    )
    sums = np.array([v.value for v in values])
    mags = np.abs(sums)
    table = pd.DataFrame({"x": xs, "re": sums.real, "im": sums.imag, "abs": mags})
    best = int(np.argmax(mags))
    return CommandOutput(
        {
            "points": args.grid,
            "max_abs": float(mags[best]),
            "argmax_x": float(xs[best]),
            "mean_square_ratio": float(np.mean(mags**2)) / max(args.n, 1),
        },
        table,
    )


# ==========================================
#  flat
# ==========================================


def _configure_flat(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--xi", type=float, required=True)
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--resolution", type=int, default=None, help="grid size R >= 4N")


def _flat(args: argparse.Namespace, _config: LabConfig) -> CommandOutput:
    return CommandOutput({"flat": flat_sum_demo(args.xi, args.n, args.resolution)})


def commands() -> list[Command]:
    return [
        Command("eval", "evaluate one Weyl sum", _configure_eval, _eval),
        Command("batch", "evaluate a monomial sum on a grid", _configure_batch, _batch),
        Command("flat", "sup-norm of the n log n flat sum", _configure_flat, _flat),
    ]
