import os
from pathlib import Path
from typing import Any, Self

from pydantic import BaseModel, Field, field_validator

from weyl_lab.core.constants import (
    BUDGET_ENV_VAR,
    DEFAULT_ANCHOR_INTERVAL,
    DEFAULT_KERNEL_BUDGET,
    DEFAULT_QUADRATURE_NODES,
    DEFAULT_SPECTRUM_BUDGET,
    LAB_CONFIG_PATH,
)
from weyl_lab.core.errors import LabValidationError
from weyl_lab.infrastructure.persistence.toml_config_io import (
    load_toml_config,
    save_toml_config,
)


class LabConfig(BaseModel):
    """ラボ全体の設定 (フラットなキー/値)"""

    kernel_budget: int = Field(
        default=DEFAULT_KERNEL_BUDGET, description="モーメントカーネルのペア評価回数の上限"
    )
    spectrum_budget: int = Field(
        default=DEFAULT_SPECTRUM_BUDGET, description="ペアスペクトルの要素数の上限"
    )
    quadrature_nodes: int = Field(
        default=DEFAULT_QUADRATURE_NODES, description="振動積分の Simpson 節点数の上限"
    )
    anchor_interval: int = Field(
        default=DEFAULT_ANCHOR_INTERVAL, description="差分表を厳密位相で張り直す間隔"
    )
    c0: float = Field(default=0.25, description="大値区間選択の閾値定数 c0")
    arc_slack: float = Field(default=20.0, description="主弧近似の誤差許容定数")
    workers: int = Field(default=1, description="並列ワーカー数 (結果は不変)")
    seed: int = Field(default=0, description="確率的経路の既定シード")
    output_dir: str = Field(default="", description="結果の保存先 (空なら既定)")
    save_records: bool = Field(default=True, description="結果レコードを保存するか")

    @field_validator(
        "kernel_budget", "spectrum_budget", "quadrature_nodes", "anchor_interval", "workers"
    )
    @classmethod
    def _positive(cls, value: int) -> int:
        if value <= 0:
            msg = f"must be positive, got {value}"
            raise ValueError(msg)
        return value

    @field_validator("seed")
    @classmethod
    def _seed_range(cls, value: int) -> int:
        if not 0 <= value < 2**64:
            msg = f"seed must be a 64-bit unsigned integer, got {value}"
            raise ValueError(msg)
        return value

    @classmethod
    def load(cls, path: str | Path = LAB_CONFIG_PATH) -> Self:
        return load_toml_config(cls, path)

    def save(self, path: str | Path = LAB_CONFIG_PATH) -> None:
        save_toml_config(self, path)

    def with_env(self) -> Self:
        """環境変数 WEYL_LAB_BUDGET によるカーネル作業量の上書き"""
        raw = os.environ.get(BUDGET_ENV_VAR)
        if not raw:
            return self
        try:
            budget = int(raw)
        except ValueError as e:
            msg = f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}"
            raise LabValidationError(msg) from e
        return self.merged({"kernel_budget": budget})

    def merged(self, overrides: dict[str, Any]) -> Self:
        """None でない値だけを上書きした新しい設定 (検証付き)"""
        data = self.model_dump()
        data.update({k: v for k, v in overrides.items() if v is not None and k in data})
        try:
            return type(self).model_validate(data)
        except ValueError as e:
            msg = f"Invalid configuration: {e}"
            raise LabValidationError(msg) from e


def resolve_config(
    path: str | Path | None = None, overrides: dict[str, Any] | None = None
) -> LabConfig:
    """設定の優先順位: フラグ > 環境変数 > 設定ファイル > 既定値"""
    base = LabConfig.load(path) if path is not None else LabConfig.load()
    return base.with_env().merged(overrides or {})


def resolve_kernel_budget(budget: int | None) -> int:
    """明示値がなければ環境変数、なければ既定値"""
    if budget is not None:
        return budget
    return LabConfig().with_env().kernel_budget


def resolve_spectrum_budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    return LabConfig().spectrum_budget
