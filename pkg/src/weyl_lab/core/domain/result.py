import cmath
import math
from dataclasses import asdict, is_dataclass
from enum import Enum
from fractions import Fraction
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from weyl_lab import __version__
from weyl_lab.core.constants import SCHEMA_VERSION


class ResultRecord(BaseModel):
    """1回のサブコマンド実行の記録 (JSON)"""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    subcommand: str
    config: dict[str, Any] = Field(default_factory=dict)
    outputs: dict[str, Any] = Field(default_factory=dict)
    wall_time: float = 0.0
    version: str = __version__

    def emit(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)

    @classmethod
    def parse(cls, text: str) -> "ResultRecord":
        return cls.model_validate_json(text)


def to_jsonable(value: Any) -> Any:  # noqa: ANN401, PLR0911
    """numpy/複素数/dataclass を JSON でそのまま往復できる値に変換する"""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, Enum):
        return value.name.lower()
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        f = float(value)
        return f if math.isfinite(f) else None
    if isinstance(value, (complex, np.complexfloating)):
        z = complex(value)
        if not cmath.isfinite(z):
            return None
        return {"re": z.real, "im": z.imag}
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if is_dataclass(value) and not isinstance(value, type):
        return {k: to_jsonable(v) for k, v in asdict(value).items()}
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [to_jsonable(v) for v in value]
    return str(value)
