"""
Запись артефактов запуска

Каталог <out>/<команда>-<hash12>/, где hash12 - первые 12 шестнадцатеричных
цифр SHA-256 канонического JSON конфигурации. В каталоге лежит config.json,
каждый JSON-артефакт дополнительно содержит конфигурацию в поле "config".
Временных меток в артефактах нет: одинаковая конфигурация и seed дают
побайтово одинаковые файлы.
"""

import hashlib
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

# 17 значащих цифр - точное восстановление float64
CSV_FLOAT_FORMAT = "%.17g"


def _plain(value: Any) -> Any:
    """numpy-типы -> стандартные, NaN/inf -> None"""
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return [_plain(item) for item in value.tolist()]
    if isinstance(value, np.generic):
        return _plain(value.item())
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def canonical_json(payload: Any) -> str:
    return json.dumps(_plain(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"


def config_hash(config: Dict[str, Any]) -> str:
    """SHA-256 компактного канонического JSON конфигурации"""
    data = json.dumps(_plain(config), sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(data.encode("utf-8")).hexdigest()


class ArtifactWriter:
    """Каталог артефактов одного запуска"""

    def __init__(self, root: Path, command: str, config: Dict[str, Any]):
        self.command = command
        self.config = _plain(config)
        self.digest = config_hash(self.config)
        self.run_dir = Path(root) / f"{command}-{self.digest[:12]}"
        self.written: List[Path] = []

    def prepare(self) -> Path:
        """Создаёт каталог и config.json"""
        self.run_dir.mkdir(parents=True, exist_ok=True)
        self._write_text("config.json", canonical_json(self.config))
        return self.run_dir

    def write_csv(self, name: str, frame: pd.DataFrame) -> Path:
        path = self.run_dir / name
        frame.to_csv(
            path,
            index=False,
            float_format=CSV_FLOAT_FORMAT,
            encoding="utf-8",
            lineterminator="\n",
        )
        self.written.append(path)
        logger.debug("Записан %s (%d строк)", path, len(frame))
        return path

    def write_json(self, name: str, payload: Dict[str, Any]) -> Path:
        """JSON-артефакт с конфигурацией в поле "config" """
        document = dict(payload)
        document["config"] = self.config
        return self._write_text(name, canonical_json(document))

    def _write_text(self, name: str, text: str) -> Path:
        path = self.run_dir / name
        path.write_text(text, encoding="utf-8", newline="\n")
        self.written.append(path)
        return path
