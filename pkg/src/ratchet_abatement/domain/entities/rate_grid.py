"""
Доменная сущность: Сетка допустимых ставок выбросов S = {c_0=0 < ... < c_n=c̄}
"""

import bisect
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
import numpy.typing as npt

from ratchet_abatement.domain.errors import InvalidParameterError


@dataclass(frozen=True)
class RateGrid:
    """Возрастающая сетка ставок"""

    rates: Tuple[float, ...]

    def __post_init__(self) -> None:
        """Валидация"""
        if len(self.rates) < 2:
            raise InvalidParameterError("Сетка должна содержать минимум две ставки")

        if self.rates[0] != 0.0:
            raise InvalidParameterError("Первая ставка сетки должна быть ровно 0")

        for left, right in zip(self.rates, self.rates[1:]):
            if not right > left:
                raise InvalidParameterError("Ставки сетки должны строго возрастать")

    @classmethod
    def uniform(cls, c_bar: float, n: int) -> "RateGrid":
        """Равномерная сетка с шагом Δc = c̄/n (c_n = c̄ ровно)"""
        if n < 1:
            raise InvalidParameterError("Число интервалов n должно быть >= 1")
        if c_bar <= 0:
            raise InvalidParameterError("c_bar должна быть > 0")
        # c̄·(i/n): равные дроби i/n дают побитово равные узлы вложенных сеток
        rates = tuple(c_bar * (i / n) for i in range(n)) + (float(c_bar),)
        return cls(rates)

    @classmethod
    def from_sequence(cls, rates: Sequence[float]) -> "RateGrid":
        return cls(tuple(float(c) for c in rates))

    @property
    def n(self) -> int:
        """Индекс верхнего уровня"""
        return len(self.rates) - 1

    @property
    def c_bar(self) -> float:
        return self.rates[-1]

    @property
    def mesh_size(self) -> float:
        """Максимальный шаг сетки"""
        return max(right - left for left, right in zip(self.rates, self.rates[1:]))

    def as_array(self) -> npt.NDArray[np.float64]:
        return np.asarray(self.rates, dtype=np.float64)

    def level_at_or_below(self, c: float) -> int:
        """Индекс наибольшей ставки сетки c_i <= c"""
        if c < 0:
            raise InvalidParameterError("Ставка не может быть отрицательной")
        return max(bisect.bisect_right(self.rates, c) - 1, 0)

    def is_refined_by(self, other: "RateGrid") -> bool:
        """Все узлы этой сетки входят в другую (вложенность S^n ⊂ S^m)?"""
        finer = set(other.rates)
        return other.c_bar == self.c_bar and all(c in finer for c in self.rates)
