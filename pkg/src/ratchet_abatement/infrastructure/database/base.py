"""
SQLAlchemy 2.0 base configuration
Синхронная работа (без async)
"""

from functools import lru_cache

from sqlalchemy import Engine, create_engine
from sqlalchemy.orm import DeclarativeBase


# Базовый класс для моделей
class Base(DeclarativeBase):
    """Базовый класс для всех ORM моделей"""


@lru_cache(maxsize=8)
def get_engine(database_url: str) -> Engine:
    """Engine на URL реестра (один на процесс для каждого URL)"""
    return create_engine(database_url, echo=False, future=True)


def init_db(database_url: str) -> Engine:
    """Создание всех таблиц"""
    engine = get_engine(database_url)
    Base.metadata.create_all(bind=engine)
    return engine
