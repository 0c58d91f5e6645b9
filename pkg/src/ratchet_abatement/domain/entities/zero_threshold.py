"""
Доменная сущность: Область ставок с нулевым оптимальным порогом
"""

from dataclasses import dataclass
from typing import Union

# Относительный допуск сравнения ставки сетки с критической ставкой
RATE_MATCH_RTOL = 1e-12


@dataclass(frozen=True)
class AllRatesZeroThreshold:
    """Λ + μ <= 0: ставка никогда не снижается"""

    def covers(self, c: float) -> bool:
        return c >= 0

    def describe(self) -> str:
        return "AllRatesZeroThreshold"


@dataclass(frozen=True)
class ZeroUpTo:
    """Порог равен нулю для c ∈ [0, c_crit]"""

    c_crit: float

    def covers(self, c: float) -> bool:
        return 0 <= c <= self.c_crit + RATE_MATCH_RTOL * max(abs(self.c_crit), 1.0)

    def describe(self) -> str:
        return f"ZeroUpTo({self.c_crit:.17g})"


@dataclass(frozen=True)
class NoZeroInterval:
    """Λ > sqrt(μ² + 2qσ²): порог положителен для всех c > 0"""

    def covers(self, c: float) -> bool:
        return c == 0

    def describe(self) -> str:
        return "NoZeroInterval"


ZeroThresholdRegion = Union[AllRatesZeroThreshold, ZeroUpTo, NoZeroInterval]
