"""サブコマンド間で共通の引数の型と組み立て。"""

import argparse
from fractions import Fraction

from weyl_lab.core.domain.interval import Box, Interval, Region
from weyl_lab.core.domain.lab_config import LabConfig
from weyl_lab.core.errors import LabValidationError
from weyl_lab.features.weyl_core.domain.models import WeightSeq


def _split(text: str) -> list[str]:
    items = [part.strip() for part in text.split(",") if part.strip()]
    if not items:
        msg = f"expected a comma-separated list, got {text!r}"
        raise argparse.ArgumentTypeError(msg)
    return items


def float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in _split(text)]
    except ValueError as e:
        msg = f"invalid number list {text!r}"
        raise argparse.ArgumentTypeError(msg) from e


def int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in _split(text)]
    except ValueError as e:
        msg = f"invalid integer list {text!r}"
        raise argparse.ArgumentTypeError(msg) from e


def fraction(text: str) -> Fraction:
    """0.6 や 3/5 を厳密な有理数として読む"""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        msg = f"invalid rational number {text!r}"
        raise argparse.ArgumentTypeError(msg) from e


def interval(text: str) -> Interval:
    """'a,b' を区間 [a, b] として読む"""
    bounds = float_list(text)
    if len(bounds) != 2:  # noqa: PLR2004
        msg = f"interval needs two endpoints a,b, got {text!r}"
        raise argparse.ArgumentTypeError(msg)
    try:
        return Interval(bounds[0], bounds[1] - bounds[0])
    except LabValidationError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def region_of(intervals: list[Interval] | None) -> Region:
    """--interval の指定なしは [0,1)、1つなら区間、複数なら箱"""
    if not intervals:
        return Interval.full()
    if len(intervals) == 1:
        return intervals[0]
    return Box(tuple(intervals))


def add_region(parser: argparse.ArgumentParser, help_text: str = "region side a,b") -> None:
    parser.add_argument("--interval", type=interval, action="append", help=help_text)


def add_weights(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--weights", choices=("ones", "random"), default="ones")
    parser.add_argument("--weight-seed", type=int, default=None)


def weights_of(args: argparse.Namespace, config: LabConfig) -> WeightSeq:
    if args.weights == "random":
        return WeightSeq.random(config.seed if args.weight_seed is None else args.weight_seed)
    return WeightSeq.ones()
