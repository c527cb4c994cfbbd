import tomllib
from pathlib import Path
from typing import Any

import tomlkit
from pydantic import BaseModel
from tomlkit import TOMLDocument, item
from tomlkit.items import Item

from weyl_lab.core import console


def load_toml_config[T: BaseModel](model_cls: type[T], path: str | Path) -> T:
    """フラットなTOMLファイルからPydanticモデルを読み込む (失敗時は既定値)"""
    path_obj = Path(path)
    if not path_obj.exists():
        return model_cls()

    try:
        with path_obj.open("rb") as f:
            data = tomllib.load(f)
        return model_cls.model_validate(data)
    except (OSError, tomllib.TOMLDecodeError, ValueError) as e:
        console.warn(f"Config load error ({model_cls.__name__}): {e}")
        return model_cls()


def save_toml_config(model_instance: BaseModel, path: str | Path) -> None:
    """PydanticモデルをTOMLファイルに保存する (既存コメント保持)"""
    path_obj = Path(path)
    new_data = model_instance.model_dump(mode="json")
    path_obj.parent.mkdir(parents=True, exist_ok=True)

    try:
        if path_obj.exists():
            # 既存ファイルは値だけ更新してコメント構造を維持する
            with path_obj.open("r", encoding="utf-8") as f:
                doc = tomlkit.load(f)
        else:
            doc = tomlkit.document()
        _update_fields_with_comments(doc, model_instance, new_data)

        with path_obj.open("w", encoding="utf-8") as f:
            tomlkit.dump(doc, f)

    except OSError as e:
        console.error(f"Config save error ({model_instance.__class__.__name__}): {e}")


# ==========================================
#  Internal Helpers
# ==========================================


def _update_fields_with_comments(
    doc: TOMLDocument, model_instance: BaseModel, current_data: dict[str, Any]
) -> None:
    """各フィールドを更新し、新規キーには description をコメントとして付ける"""
    for field_name, field_info in type(model_instance).model_fields.items():
        if field_name not in current_data:
            continue

        value = current_data[field_name]
        if field_name in doc:
            # [既存] 値のみ更新
            doc[field_name] = value
            continue

        # [新規] 追加してコメント付与
        it: Item = item(value)
        if field_info.description:
            it.comment(field_info.description)
        doc.add(field_name, it)
