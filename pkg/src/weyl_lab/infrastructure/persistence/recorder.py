from dataclasses import dataclass
from pathlib import Path

import pandas as pd

from weyl_lab.core import console
from weyl_lab.core.domain.result import ResultRecord
from weyl_lab.infrastructure.persistence.result_store import RecordFile, ResultStore

# 実数は 17 桁 (往復可能), ロケール非依存
CSV_FLOAT_FORMAT = "%.17g"


@dataclass
class SavedPaths:
    record: Path
    table: Path | None


def write_table(table: pd.DataFrame, path: Path) -> Path:
    """表を CSV で書き出す"""
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    return path


def read_table(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, float_precision="round_trip")


class ResultRecorder:
    """結果レコード (JSON) と表 (CSV) の記録を担当するクラス"""

    def __init__(self, store: ResultStore) -> None:
        self.store = store

    def save(
        self,
        record: ResultRecord,
        table: pd.DataFrame | None = None,
        record_path: Path | None = None,
        table_path: Path | None = None,
        major_update: bool = False,
    ) -> SavedPaths:
        if record_path is None:
            target = self.store.today().create_record(record.subcommand, major_update)
        else:
            target = RecordFile(record_path)
        target.write_text(record.emit())
        console.saved(f"{target.path}")

        written_table = None
        if table is not None:
            written_table = write_table(table, table_path or target.csv_path)
            console.saved(f"{written_table}")
        return SavedPaths(target.path, written_table)
