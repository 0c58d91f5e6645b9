"""
Управление сессиями SQLAlchemy 2.0 (синхронное)
"""

from contextlib import contextmanager
from typing import Generator

from sqlalchemy.orm import Session, sessionmaker

from .base import init_db


@contextmanager
def get_session(database_url: str) -> Generator[Session, None, None]:
    """
    Контекстный менеджер для сессий реестра

    Таблицы создаются при первом обращении.

    Использование:
        with get_session("sqlite:///artifacts/runs.sqlite") as session:
            RecordRunUseCase(session).history()
    """
    factory = sessionmaker(
        bind=init_db(database_url),
        autocommit=False,
        autoflush=False,
        future=True,
    )
    session = factory()
    try:
        yield session
        session.commit()
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()
