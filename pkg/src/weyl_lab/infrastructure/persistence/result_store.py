import datetime
import re
from dataclasses import dataclass
from pathlib import Path

from weyl_lab.core import console
from weyl_lab.core.constants import RESULTS_DIR

# ---------------------------------------------------------------------------
# Helpers / Parsers
# ---------------------------------------------------------------------------

# 結果ファイル名: [major.minor]SUBCOMMAND-yyyymmddHHMMSS.json
RECORD_PATTERN = re.compile(r"^\[(\d+)\.(\d+)\]([A-Z0-9]+)\-(\d{14})\.json$")
DATE_DIR_PATTERN = re.compile(r"^\d{6}$")  # YYMMDD


@dataclass(frozen=True)
class RecordFileMetadata:
    """結果ファイル名から抽出されるメタデータ"""

    major: int
    minor: int
    subcommand: str


def parse_record_name(filename: str) -> RecordFileMetadata | None:
    match = RECORD_PATTERN.match(filename)
    if match is None:
        return None
    return RecordFileMetadata(
        major=int(match.group(1)), minor=int(match.group(2)), subcommand=match.group(3)
    )


def parse_date_dirname(dirname: str) -> datetime.date | None:
    """ディレクトリ名 (YYMMDD) から日付を抽出する"""
    if not DATE_DIR_PATTERN.match(dirname):
        return None
    try:
        return datetime.datetime.strptime(dirname, "%y%m%d").astimezone().date()
    except ValueError:
        return None


def normalize_subcommand(name: str) -> str:
    """サブコマンド名をファイル名用に正規化 (英数字大文字のみ) する"""
    formatted = re.sub(r"[^a-zA-Z0-9]", "", name).upper()
    return formatted if formatted else "DEFAULT"


def generate_timestamp() -> str:
    return datetime.datetime.now().astimezone().strftime("%Y%m%d%H%M%S")


class RecordFile:
    """個別の結果ファイル (JSON と同名の CSV)"""

    def __init__(self, path: Path) -> None:
        self.path = path
        self._metadata = parse_record_name(path.name)

    @property
    def number(self) -> str:
        if self._metadata is None:
            return "0.0"
        return f"{self._metadata.major}.{self._metadata.minor}"

    @property
    def subcommand(self) -> str | None:
        return None if self._metadata is None else self._metadata.subcommand

    @property
    def date(self) -> datetime.date | None:
        return parse_date_dirname(self.path.parent.name)

    @property
    def csv_path(self) -> Path:
        return self.path.with_suffix(".csv")

    def write_text(self, content: str) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(content, encoding="utf-8")


class DateRecordDirectory:
    """日付ごとのディレクトリと結果ファイルの連番を管理するクラス"""

    def __init__(self, path: Path) -> None:
        self.path = path

    def __str__(self) -> str:
        return f"DateRecordDirectory(path={self.path})"

    def get_record_files(self) -> list[RecordFile]:
        if not self.path.exists():
            return []
        files = [
            RecordFile(entry)
            for entry in self.path.iterdir()
            if entry.is_file() and RECORD_PATTERN.match(entry.name)
        ]
        return sorted(files, key=lambda f: f.path.name)

    def _find_current_version(self) -> tuple[int, int]:
        versions = []
        for record in self.get_record_files():
            meta = record._metadata  # noqa: SLF001
            if meta is not None:
                versions.append((meta.major, meta.minor))
        return max(versions) if versions else (0, 0)

    def get_next_number(self, major_update: bool) -> tuple[int, int]:
        """パネル実行ごとにメジャー番号、単発実行ごとにマイナー番号を進める"""
        current_major, current_minor = self._find_current_version()

        if current_major == 0 and current_minor == 0:
            return (1, 1) if major_update else (0, 1)
        if major_update:
            return (current_major + 1, 1)
        return (current_major, current_minor + 1)

    def create_record(self, subcommand: str, major_update: bool = False) -> RecordFile:
        major, minor = self.get_next_number(major_update)
        name = normalize_subcommand(subcommand)
        filename = f"[{major}.{minor}]{name}-{generate_timestamp()}.json"
        self.path.mkdir(parents=True, exist_ok=True)
        return RecordFile(self.path / filename)


class ResultStore:
    """結果レコードのルート管理クラス"""

    def __init__(self, base_path: str | Path = RESULTS_DIR) -> None:
        self.base_path = Path(base_path)

    def __str__(self) -> str:
        return f"ResultStore(path={self.base_path})"

    def _date_directories(self) -> list[tuple[datetime.date, DateRecordDirectory]]:
        if not self.base_path.exists():
            return []
        found = []
        try:
            for entry in self.base_path.iterdir():
                parsed = parse_date_dirname(entry.name) if entry.is_dir() else None
                if parsed is not None:
                    found.append((parsed, DateRecordDirectory(entry)))
        except OSError as e:
            console.warn(f"Error scanning result directory {self.base_path}: {e}")
        return sorted(found, key=lambda pair: pair[0])

    def today(self) -> DateRecordDirectory:
        dir_name = datetime.datetime.now().astimezone().strftime("%y%m%d")
        return DateRecordDirectory(self.base_path / dir_name)

    def all_records(self) -> list[RecordFile]:
        """全日付ディレクトリの結果ファイルを時系列順に取得する"""
        records: list[RecordFile] = []
        for _, date_dir in self._date_directories():
            records.extend(date_dir.get_record_files())
        return records
