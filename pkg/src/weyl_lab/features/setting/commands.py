import argparse
from pathlib import Path

import pandas as pd

from weyl_lab.core import console
from weyl_lab.core.constants import LAB_CONFIG_PATH, RESULTS_DIR
from weyl_lab.core.domain.lab_config import LabConfig
from weyl_lab.infrastructure.persistence.recorder import read_table
from weyl_lab.infrastructure.persistence.result_store import ResultStore, normalize_subcommand
from weyl_lab.presentation.components.command import Command, CommandOutput

RECORD_COLUMNS = ["date", "number", "subcommand", "table_rows", "path"]


def _configure_config(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--defaults", action="store_true", help="write built-in defaults instead of the resolved"
    )


def _config(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    """解決済みの設定 (または既定値) をコメント付き TOML として書き出す"""
    path = Path(args.config) if args.config else LAB_CONFIG_PATH
    written = LabConfig() if args.defaults else config
    written.save(path)
    console.saved(f"Config written to {path}")
    return CommandOutput({"path": str(path), "config": written.model_dump(mode="json")})


def _configure_records(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--only", default=None, help="list records of this subcommand only")


def _records(args: argparse.Namespace, config: LabConfig) -> CommandOutput:
    """保存済みの結果レコードを日付と連番の順に一覧する"""
    store = ResultStore(config.output_dir or RESULTS_DIR)
    wanted = normalize_subcommand(args.only) if args.only else None
    rows = []
    for record in store.all_records():
        if wanted is not None and record.subcommand != wanted:
            continue
        table_rows = len(read_table(record.csv_path)) if record.csv_path.exists() else None
        rows.append(
            {
                "date": record.date.isoformat() if record.date else None,
                "number": record.number,
                "subcommand": record.subcommand,
                "table_rows": table_rows,
                "path": str(record.path),
            }
        )
    console.info(f"{len(rows)} records under {store.base_path}")
    table = pd.DataFrame(rows, columns=RECORD_COLUMNS)
    return CommandOutput({"count": len(rows), "records": rows}, table)


def commands() -> list[Command]:
    return [
        Command(
            "config", "write the lab configuration file", _configure_config, _config, records=False
        ),
        Command(
            "records", "list saved result records", _configure_records, _records, records=False
        ),
    ]
