"""
Ratchet Abatement - оптимальное снижение выбросов с ограничением ratcheting-down
Точка входа без установки пакета: python main.py solve --config run.json
"""

import sys
from pathlib import Path

# Добавляем src в путь
sys.path.insert(0, str(Path(__file__).parent / "src"))

from ratchet_abatement.presentation.cli.main import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
