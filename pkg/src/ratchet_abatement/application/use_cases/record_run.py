"""
Use Case: Регистрация запуска CLI в реестре
"""

import json
from typing import Any, Dict, List, Optional

from sqlalchemy import select
from sqlalchemy.orm import Session

from ratchet_abatement.infrastructure.database.models import RunRecordModel


class RecordRunUseCase:
    """
    Use Case: Запись и чтение реестра запусков

    Реестр не входит в детерминированный набор артефактов: в нём есть
    время создания записи.
    """

    def __init__(self, session: Session):
        self.session = session

    def execute(
        self,
        command: str,
        config_hash: str,
        output_dir: str,
        exit_code: int,
        summary: Dict[str, Any],
    ) -> RunRecordModel:
        """Сохраняет запись о запуске"""
        status = {0: "ok", 4: "verification_failed"}.get(exit_code, "failed")
        record = RunRecordModel(
            command=command,
            config_hash=config_hash,
            output_dir=output_dir,
            status=status,
            exit_code=exit_code,
            summary_json=json.dumps(summary, sort_keys=True, default=str),
        )
        self.session.add(record)
        self.session.flush()
        return record

    def history(self, command: Optional[str] = None) -> List[RunRecordModel]:
        """Записи реестра, новые первыми"""
        stmt = select(RunRecordModel).order_by(RunRecordModel.id.desc())
        if command is not None:
            stmt = stmt.where(RunRecordModel.command == command)
        return list(self.session.scalars(stmt).all())
