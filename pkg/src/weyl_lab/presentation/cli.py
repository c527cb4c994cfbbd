"""
コマンドラインの入口。

weyl SUBCOMMAND [共通フラグ] [サブコマンドのフラグ]
終了コード: 0 成功, 1 未知のサブコマンド, 2 検証エラー, 3 作業量超過, 4 数値チェック/パネル不合格
"""

import argparse
import sys
import time
from collections.abc import Sequence
from pathlib import Path

from weyl_lab.core import console
from weyl_lab.core.constants import RESULTS_DIR
from weyl_lab.core.domain.lab_config import LabConfig, resolve_config
from weyl_lab.core.domain.result import ResultRecord, to_jsonable
from weyl_lab.core.errors import BudgetExceededError, LabValidationError, NumericalCheckError
from weyl_lab.infrastructure.persistence.recorder import ResultRecorder, write_table
from weyl_lab.infrastructure.persistence.result_store import ResultStore
from weyl_lab.presentation.app_command import CommandFactory
from weyl_lab.presentation.components.command import Command, CommandOutput

EXIT_OK = 0
EXIT_UNKNOWN = 1
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_CHECK = 4

# サブコマンドのパラメータとしては記録しない共通フラグ
_COMMON_KEYS = frozenset(
    {
        "command",
        "subcommand",
        "config",
        "workers",
        "seed",
        "budget",
        "spectrum_budget",
        "nodes",
        "output",
        "csv",
        "output_dir",
        "no_save",
    }
)


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("common")
    group.add_argument("--config", type=Path, default=None, help="lab config TOML")
    group.add_argument("--workers", type=int, default=None)
    group.add_argument("--seed", type=int, default=None)
    group.add_argument("--budget", type=int, default=None, help="kernel pair evaluations")
    group.add_argument("--spectrum-budget", type=int, default=None)
    group.add_argument("--nodes", type=int, default=None, help="quadrature node limit")
    group.add_argument("--output", type=Path, default=None, help="record JSON path")
    group.add_argument("--csv", type=Path, default=None, help="table CSV path")
    group.add_argument("--output-dir", type=str, default=None, help="results directory")
    group.add_argument("--no-save", action="store_true", help="do not store the record")
    return common


def build_parser(commands: Sequence[Command]) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weyl", description="Weyl sums numerical laboratory")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    common = _common_flags()
    for command in commands:
        p = sub.add_parser(command.name, help=command.help, parents=[common])
        command.configure(p)
        p.set_defaults(command=command)
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    return {
        "kernel_budget": args.budget,
        "spectrum_budget": args.spectrum_budget,
        "quadrature_nodes": args.nodes,
        "workers": args.workers,
        "seed": args.seed,
        "output_dir": args.output_dir,
        "save_records": False if args.no_save else None,
    }


def _params(args: argparse.Namespace) -> dict:
    return {k: v for k, v in vars(args).items() if k not in _COMMON_KEYS}


def _persist(
    command: Command,
    args: argparse.Namespace,
    config: LabConfig,
    record: ResultRecord,
    output: CommandOutput,
) -> None:
    if not command.records:
        return
    if args.output is not None or config.save_records:
        store = ResultStore(config.output_dir or RESULTS_DIR)
        ResultRecorder(store).save(
            record, output.table, args.output, args.csv, command.major_update
        )
    elif args.csv is not None and output.table is not None:
        console.saved(f"{write_table(output.table, args.csv)}")


def run_command(
    argv: Sequence[str], commands: Sequence[Command] | None = None
) -> tuple[int, ResultRecord | None]:
    """1回のサブコマンド実行 (終了コードとレコード)"""
    commands = list(commands) if commands is not None else CommandFactory.create_commands()
    parser = build_parser(commands)
    names = {c.name for c in commands}
    argv = list(argv)

    if not argv or (argv[0] not in names and argv[0] not in {"-h", "--help"}):
        parser.print_usage(sys.stderr)
        console.error(f"unknown subcommand: {argv[0] if argv else '(none)'}")
        return EXIT_UNKNOWN, None

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return (e.code if isinstance(e.code, int) else EXIT_VALIDATION), None

    command: Command = args.command
    start = time.perf_counter()
    try:
        config = resolve_config(args.config, _overrides(args))
        output = command.handler(args, config)
    except LabValidationError as e:
        console.error(f"{command.name}: {e}")
        return EXIT_VALIDATION, None
    except BudgetExceededError as e:
        console.error(f"{command.name}: {e}")
        return EXIT_BUDGET, None
    except NumericalCheckError as e:
        console.error(f"{command.name}: {e}")
        return EXIT_CHECK, None

    record = ResultRecord(
        subcommand=command.name,
        config=to_jsonable({"lab": config, "params": _params(args)}),
        outputs=to_jsonable(output.outputs),
        wall_time=time.perf_counter() - start,
    )
    print(record.emit())
    _persist(command, args, config, record, output)
    return (EXIT_CHECK if output.failed else EXIT_OK), record


def run(argv: Sequence[str]) -> int:
    code, _ = run_command(argv)
    return code
