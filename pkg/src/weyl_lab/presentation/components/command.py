import argparse
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import pandas as pd

from weyl_lab.core.domain.lab_config import LabConfig


@dataclass
class CommandOutput:
    """サブコマンドの出力 (レコードの outputs と任意の表)"""

    outputs: dict[str, Any] = field(default_factory=dict)
    table: pd.DataFrame | None = None
    failed: bool = False  # パネルの不合格など (終了コード 4)


type Handler = Callable[[argparse.Namespace, LabConfig], CommandOutput]


@dataclass(frozen=True)
class Command:
    """1つのサブコマンドを構成する要素"""

    name: str
    help: str
    configure: Callable[[argparse.ArgumentParser], None]
    handler: Handler
    major_update: bool = False  # 結果ファイルのメジャー番号を進める
    records: bool = True  # 結果レコードを作るか
