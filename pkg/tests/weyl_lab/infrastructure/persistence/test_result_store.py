from pathlib import Path

import pandas as pd
import pytest

from weyl_lab.core.domain.result import ResultRecord
from weyl_lab.infrastructure.persistence.recorder import ResultRecorder, read_table
from weyl_lab.infrastructure.persistence.result_store import (
    ResultStore,
    normalize_subcommand,
    parse_date_dirname,
    parse_record_name,
)


class TestNames:
    def test_normalize_subcommand(self) -> None:
        assert normalize_subcommand("cexA") == "CEXA"
        assert normalize_subcommand("moment-2") == "MOMENT2"
        assert normalize_subcommand("--") == "DEFAULT"

    def test_parse_record_name(self) -> None:
        meta = parse_record_name("[2.3]REPCOUNT-20260101120000.json")
        assert meta is not None
        assert (meta.major, meta.minor, meta.subcommand) == (2, 3, "REPCOUNT")
        assert parse_record_name("notes.json") is None

    def test_parse_date_dirname(self) -> None:
        parsed = parse_date_dirname("260315")
        assert parsed is not None
        assert (parsed.month, parsed.day) == (3, 15)
        assert parse_date_dirname("2026-03-15") is None


class TestNumbering:
    @pytest.fixture
    def store(self, tmp_path: Path) -> ResultStore:
        return ResultStore(tmp_path / "results")

    def _write(self, store: ResultStore, name: str, major_update: bool = False) -> str:
        record = store.today().create_record(name, major_update)
        record.write_text("{}")
        return record.number

    def test_single_runs_advance_minor(self, store: ResultStore) -> None:
        assert self._write(store, "eval") == "0.1"
        assert self._write(store, "dims") == "0.2"

    def test_panel_opens_major(self, store: ResultStore) -> None:
        assert self._write(store, "eval") == "0.1"
        assert self._write(store, "panel", major_update=True) == "1.1"
        assert self._write(store, "eval") == "1.2"
        assert self._write(store, "panel", major_update=True) == "2.1"

    def test_all_records(self, store: ResultStore) -> None:
        assert store.all_records() == []
        self._write(store, "eval")
        self._write(store, "disc")
        assert len(store.all_records()) == 2


class TestRecorder:
    def test_saves_record_and_table(self, tmp_path: Path) -> None:
        recorder = ResultRecorder(ResultStore(tmp_path))
        record = ResultRecord(subcommand="batch", outputs={"max_abs": 12.5})
        table = pd.DataFrame({"x": [0.1, 1 / 3], "abs": [2.0 / 7.0, 1e-300]})

        paths = recorder.save(record, table)

        assert paths.record.name.startswith("[0.1]BATCH-")
        assert ResultRecord.parse(paths.record.read_text(encoding="utf-8")) == record
        assert paths.table == paths.record.with_suffix(".csv")
        loaded = read_table(paths.table)
        assert loaded["x"].tolist() == [0.1, 1 / 3]
        assert loaded["abs"].tolist() == [2.0 / 7.0, 1e-300]

    def test_seventeen_digits(self, tmp_path: Path) -> None:
        recorder = ResultRecorder(ResultStore(tmp_path))
        table = pd.DataFrame({"v": [1 / 3]})
        paths = recorder.save(ResultRecord(subcommand="x"), table, table_path=tmp_path / "t.csv")
        assert paths.table is not None
        assert "0.33333333333333331" in paths.table.read_text(encoding="utf-8")

    def test_explicit_record_path(self, tmp_path: Path) -> None:
        target = tmp_path / "out" / "record.json"
        paths = ResultRecorder(ResultStore(tmp_path / "unused")).save(
            ResultRecord(subcommand="dims"), record_path=target
        )
        assert paths.record == target
        assert target.is_file()
        assert paths.table is None
