"""
Configuration - Настройки процесса и конфигурация запуска
"""

from .run_config import COMMANDS, RunConfig, load_run_config
from .settings import Settings

__all__ = ["Settings", "RunConfig", "load_run_config", "COMMANDS"]
