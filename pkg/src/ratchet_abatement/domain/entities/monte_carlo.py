"""
Доменные сущности Monte Carlo: конфигурация и оценка
"""

import math
from dataclasses import dataclass
from typing import Optional

from ratchet_abatement.domain.entities.model_params import ModelParams
from ratchet_abatement.domain.errors import InvalidParameterError

# Квантиль нормального распределения для 95% доверительного интервала
Z_95 = 1.96

# Относительный допуск хвоста по умолчанию: tail_tol = 1e-6 * (c̄+Λ)/q
DEFAULT_TAIL_RTOL = 1e-6


# pylint: disable=too-many-instance-attributes
@dataclass(frozen=True)
class McConfig:
    """Параметры симуляции Эйлера-Маруямы"""

    dt: float = 1e-3
    n_paths: int = 10_000
    seed: int = 20240917
    tail_tol: Optional[float] = None  # None -> 1e-6 * (c̄+Λ)/q
    batch_size: int = 2048
    antithetic: bool = False

    def __post_init__(self) -> None:
        """Валидация"""
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise InvalidParameterError("Шаг dt должен быть положительным")

        if self.n_paths < 1:
            raise InvalidParameterError("n_paths должно быть >= 1")

        if not 0 <= self.seed < 2**64:
            raise InvalidParameterError("seed должен быть 64-битным беззнаковым целым")

        if self.tail_tol is not None and self.tail_tol <= 0:
            raise InvalidParameterError("tail_tol должен быть > 0")

        if self.batch_size < 1:
            raise InvalidParameterError("batch_size должен быть >= 1")

        if self.antithetic and self.batch_size % 2:
            raise InvalidParameterError("При antithetic batch_size должен быть чётным")

    def resolved_tail_tol(self, params: ModelParams) -> float:
        if self.tail_tol is not None:
            return self.tail_tol
        return DEFAULT_TAIL_RTOL * params.value_cap

    def horizon(self, params: ModelParams) -> float:
        """Горизонт T с e^{-qT}(c̄+Λ)/q < tail_tol, кратный dt"""
        return self.n_steps(params) * self.dt

    def n_steps(self, params: ModelParams) -> int:
        ratio = params.value_cap / self.resolved_tail_tol(params)
        raw = math.log(ratio) / params.q if ratio > 1 else 0.0
        return max(int(math.floor(raw / self.dt)) + 1, 1)

    @property
    def n_batches(self) -> int:
        return -(-self.n_paths // self.batch_size)


@dataclass(frozen=True)
class McEstimate:
    """Оценка среднего с полушириной 95% интервала"""

    mean: float
    half_width_95: float
    n_paths: int
    degenerate: bool = False  # n_paths = 1: дисперсия не оценивается
    censored_fraction: Optional[float] = None  # только для времени исчерпания

    @classmethod
    def from_samples(
        cls, mean: float, variance: float, n_paths: int, censored: Optional[float] = None
    ) -> "McEstimate":
        """Строит оценку по выборочным среднему и несмещённой дисперсии"""
        if n_paths == 1:
            return cls(mean, 0.0, 1, degenerate=True, censored_fraction=censored)
        half_width = Z_95 * math.sqrt(max(variance, 0.0) / n_paths)
        return cls(mean, half_width, n_paths, censored_fraction=censored)

    @property
    def lower(self) -> float:
        return self.mean - self.half_width_95

    @property
    def upper(self) -> float:
        return self.mean + self.half_width_95
