"""
Настройки процесса из окружения и .env

Переменные с префиксом RATCHET_: RATCHET_LOG_LEVEL, RATCHET_DATABASE_URL,
RATCHET_WORKERS, RATCHET_OUTPUT_DIR.
"""

from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Настройки, не влияющие на содержимое артефактов"""

    model_config = SettingsConfigDict(
        env_prefix="RATCHET_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    log_level: str = "INFO"
    database_url: Optional[str] = None  # None -> sqlite в каталоге вывода
    workers: int = Field(default=1, ge=1)
    output_dir: Path = Path("artifacts")

    def registry_url(self, output_dir: Optional[Path] = None) -> str:
        """URL реестра запусков"""
        if self.database_url:
            return self.database_url
        root = output_dir if output_dir is not None else self.output_dir
        return f"sqlite:///{(root / 'runs.sqlite').as_posix()}"
