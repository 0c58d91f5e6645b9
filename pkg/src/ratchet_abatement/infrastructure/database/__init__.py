"""
Database infrastructure - SQLAlchemy 2.0 (реестр запусков)
"""

from .base import Base, get_engine, init_db
from .models import RunRecordModel
from .session import get_session

__all__ = [
    "Base",
    "get_engine",
    "init_db",
    "get_session",
    "RunRecordModel",
]
