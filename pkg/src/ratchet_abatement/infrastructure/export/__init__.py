"""
Export - CSV / JSON артефакты с хешем конфигурации
"""

from .artifacts import ArtifactWriter, canonical_json, config_hash

__all__ = ["ArtifactWriter", "canonical_json", "config_hash"]
