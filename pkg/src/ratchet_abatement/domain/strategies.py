"""
Стратегии выбросов для Monte Carlo

Каждая стратегия реализует абстрактный класс EmissionStrategy и возвращает
ставку выбросов для всех траекторий пакета сразу. Движок хранит текущую ставку
каждой траектории и передаёт её в rate(); стратегии с ограничением
ratcheting-down обязаны никогда её не повышать.

1. MultiThreshold - оптимальная пороговая политика на сетке ставок
2. ConstantRate - постоянная ставка c
3. LinearSchedule - детерминированное снижение c(t) = max(c̄ - m t, 0)
4. Barrier - эталон без ratcheting: c̄ выше барьера b, 0 ниже (не допустима)
5. NoEmission - ставка 0
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Type

import numpy as np
import numpy.typing as npt

from ratchet_abatement.domain.entities.value_surface import ValueSurface
from ratchet_abatement.domain.errors import InvalidParameterError

FloatArray = npt.NDArray[np.float64]


class EmissionStrategy(ABC):
    """Базовая стратегия выбросов"""

    @abstractmethod
    def initial_rate(self) -> float:
        """Ставка до первого шага (верхняя граница для ratcheting-стратегий)"""

    @abstractmethod
    def rate(self, t: float, x: FloatArray, current: FloatArray) -> FloatArray:
        """
        Ставка на шаге [t, t + dt)

        Args:
            t: Время начала шага
            x: Бюджет каждой траектории в момент t
            current: Ставка каждой траектории на предыдущем шаге

        Returns:
            Ставка для каждой траектории
        """

    @abstractmethod
    def get_name(self) -> str:
        """Имя стратегии в таблицах и артефактах"""

    def is_ratcheting(self) -> bool:
        """Ставка не возрастает вдоль траектории?"""
        return True


class MultiThresholdStrategy(EmissionStrategy):
    """
    Пороговая политика решённой поверхности

    Из уровня L ставка опускается, пока x <= z*(c_L) и z*(c_L) > 0. Уровень с
    нулевым порогом активен при любом положительном бюджете.
    """

    def __init__(self, surface: ValueSurface, start_level: Optional[int] = None):
        level = surface.top_level if start_level is None else start_level
        surface.require_level(level)
        self.surface = surface
        self.start_level = level
        self._rates = surface.grid.as_array()[: surface.solved_levels]
        self._thresholds = np.asarray(surface.z_star, dtype=np.float64)

    def initial_rate(self) -> float:
        return float(self._rates[self.start_level])

    def levels_for(self, x: FloatArray, levels: npt.NDArray[np.int64]) -> npt.NDArray[np.int64]:
        """Спуск по уровням: новые индексы уровней не выше исходных"""
        levels = levels.copy()
        while True:
            z = self._thresholds[levels]
            descend = (levels > 0) & (z > 0) & (x <= z)
            if not descend.any():
                return levels
            levels[descend] -= 1

    def rate(self, t: float, x: FloatArray, current: FloatArray) -> FloatArray:
        levels = np.searchsorted(self._rates, current).astype(np.int64)
        levels = np.minimum(levels, len(self._rates) - 1)
        return self._rates[self.levels_for(x, levels)]

    def get_name(self) -> str:
        return "multi_threshold"


class ConstantRateStrategy(EmissionStrategy):
    """Постоянная ставка c до исчерпания"""

    def __init__(self, c: float):
        if not c >= 0:
            raise InvalidParameterError(f"Ставка должна быть >= 0, получено {c}")
        self.c = float(c)

    def initial_rate(self) -> float:
        return self.c

    def rate(self, t: float, x: FloatArray, current: FloatArray) -> FloatArray:
        return np.full_like(x, self.c)

    def get_name(self) -> str:
        return f"constant({self.c:g})"


class LinearScheduleStrategy(EmissionStrategy):
    """c(t) = max(c̄ - m t, 0), не зависит от бюджета"""

    def __init__(self, c_bar: float, slope: float):
        if not c_bar > 0:
            raise InvalidParameterError("c_bar должна быть > 0")
        if not slope >= 0:
            raise InvalidParameterError("Наклон m не может быть отрицательным")
        self.c_bar = float(c_bar)
        self.slope = float(slope)

    def initial_rate(self) -> float:
        return self.c_bar

    def rate(self, t: float, x: FloatArray, current: FloatArray) -> FloatArray:
        return np.full_like(x, max(self.c_bar - self.slope * t, 0.0))

    def get_name(self) -> str:
        return "linear"


class BarrierStrategy(EmissionStrategy):
    """Эталон без ratcheting: ставка может возрастать"""

    def __init__(self, b: float, c_bar: float):
        if not b >= 0:
            raise InvalidParameterError("Барьер b не может быть отрицательным")
        self.b = float(b)
        self.c_bar = float(c_bar)

    def initial_rate(self) -> float:
        return self.c_bar

    def rate(self, t: float, x: FloatArray, current: FloatArray) -> FloatArray:
        return np.where(x > self.b, self.c_bar, 0.0)

    def get_name(self) -> str:
        return "barrier"

    def is_ratcheting(self) -> bool:
        return False


class NoEmissionStrategy(EmissionStrategy):
    """Ставка 0: бюджет - броуновское движение со сносом μ"""

    def initial_rate(self) -> float:
        return 0.0

    def rate(self, t: float, x: FloatArray, current: FloatArray) -> FloatArray:
        return np.zeros_like(x)

    def get_name(self) -> str:
        return "no_emission"


class StrategyFactory:
    """
    Фабрика стратегий

    Создаёт стратегии по именам из конфигурации запуска.
    """

    _strategies: Dict[str, Type[EmissionStrategy]] = {
        "multi_threshold": MultiThresholdStrategy,
        "constant": ConstantRateStrategy,
        "linear": LinearScheduleStrategy,
        "barrier": BarrierStrategy,
        "no_emission": NoEmissionStrategy,
    }

    @classmethod
    def create(cls, strategy_name: str, **kwargs: Any) -> EmissionStrategy:
        """
        Создаёт стратегию по имени

        Args:
            strategy_name: Имя стратегии ('multi_threshold', 'constant', ...)
            **kwargs: Аргументы конструктора (surface, c, c_bar, slope, b)

        Raises:
            InvalidParameterError: Если указана неизвестная стратегия
        """
        if strategy_name not in cls._strategies:
            raise InvalidParameterError(
                f"Неизвестная стратегия: {strategy_name}. "
                f"Доступны: {list(cls._strategies.keys())}"
            )

        strategy_class: Type[EmissionStrategy] = cls._strategies[strategy_name]
        return strategy_class(**kwargs)

    @classmethod
    def get_all_strategies(cls) -> List[str]:
        return list(cls._strategies.keys())
