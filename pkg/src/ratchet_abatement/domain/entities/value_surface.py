"""
Доменная сущность: Поверхность ценности многопороговой стратегии

Уровень i хранит только пару (z*(c_i), a*(c_i)). Значение восстанавливается
рекурсивно: W(x, c_i) = W(x, c_{i-1}) при x <= z*(c_i), иначе
((c_i + Λ)/q)(1 - a*(c_i) e^{θ₁(c_i) x}). Уровень 0 - та же формула с
z = 0, a = 1 (стратегия без выбросов).
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np
import numpy.typing as npt

from ratchet_abatement.domain.entities.model_params import ModelParams
from ratchet_abatement.domain.entities.rate_grid import RateGrid
from ratchet_abatement.domain.errors import InvalidParameterError, LevelOrderError

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]

# e^{θ₁x} обнуляется ниже этой границы показателя
EXP_UNDERFLOW = -745.0


def clamped_exp(arg: FloatArray) -> FloatArray:
    """e^arg с обнулением при arg < -745"""
    return np.where(arg < EXP_UNDERFLOW, 0.0, np.exp(np.maximum(arg, EXP_UNDERFLOW)))


class RegionClass(Enum):
    """Классификация точки в проверке HJB"""

    EMIT = "EmitRegion"
    REDUCE = "ReduceRegion"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class HjbReport:
    """Невязки дискретного HJB в точке (уровень, x)"""

    level: int
    x: float
    generator_residual: float
    complementarity_gap: Optional[float]  # None на уровне 0
    classification: RegionClass
    violation: bool


# pylint: disable=too-many-instance-attributes
@dataclass(frozen=True)
class ValueSurface:
    """Пороговая поверхность, решённая для уровней 0..solved_levels-1"""

    params: ModelParams
    grid: RateGrid
    z_star: Tuple[float, ...]
    a_star: Tuple[float, ...]
    theta1: Tuple[float, ...]
    _segments: Dict[int, Tuple[FloatArray, IntArray]] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        """Валидация"""
        size = len(self.z_star)
        if size == 0:
            raise InvalidParameterError("Поверхность должна содержать уровень 0")

        if len(self.a_star) != size or len(self.theta1) != size:
            raise InvalidParameterError("Длины z_star, a_star и theta1 должны совпадать")

        if size > self.grid.n + 1:
            raise InvalidParameterError("Уровней больше, чем ставок в сетке")

        if self.z_star[0] != 0.0 or self.a_star[0] != 1.0:
            raise InvalidParameterError("Уровень 0 обязан иметь z* = 0 и a* = 1")

        if any(z < 0 for z in self.z_star):
            raise InvalidParameterError("Пороги z* не могут быть отрицательными")

    @property
    def solved_levels(self) -> int:
        """Количество решённых уровней"""
        return len(self.z_star)

    @property
    def is_complete(self) -> bool:
        """Решены все уровни сетки?"""
        return self.solved_levels == self.grid.n + 1

    @property
    def top_level(self) -> int:
        return self.solved_levels - 1

    def rate(self, level: int) -> float:
        return self.grid.rates[level]

    def level_cap(self, level: int) -> float:
        """Предел (c_i + Λ)/q на бесконечности"""
        return (self.grid.rates[level] + self.params.lam) / self.params.q

    def require_level(self, level: int) -> None:
        """Проверяет, что уровень существует и решён"""
        if level < 0 or level > self.grid.n:
            raise LevelOrderError(f"Уровень {level} вне сетки 0..{self.grid.n}")
        if level >= self.solved_levels:
            raise LevelOrderError(
                f"Уровень {level} не решён (решено {self.solved_levels} уровней)"
            )

    def extended(self, z: float, a: float, theta1: float) -> "ValueSurface":
        """Новая поверхность с ещё одним решённым уровнем (кэш отрезков переносится)"""
        surface = ValueSurface(
            params=self.params,
            grid=self.grid,
            z_star=self.z_star + (float(z),),
            a_star=self.a_star + (float(a),),
            theta1=self.theta1 + (float(theta1),),
        )
        surface._segments.update(self._segments)
        return surface

    def segments(self, level: int) -> Tuple[FloatArray, IntArray]:
        """
        Таблица активных уровней для W(·, c_level)

        Returns:
            (breaks, levels): на (breaks[k], breaks[k+1]] активен уровень levels[k];
            точка x = 0 относится к первому отрезку
        """
        self.require_level(level)
        if level in self._segments:
            return self._segments[level]

        start = level
        while start > 0 and start - 1 not in self._segments:
            start -= 1

        for i in range(start, level + 1):
            z = self.z_star[i]
            if i == 0 or z == 0.0:
                table = (np.zeros(1), np.array([i], dtype=np.int64))
            else:
                prev_breaks, prev_levels = self._segments[i - 1]
                keep = prev_breaks < z
                table = (
                    np.append(prev_breaks[keep], z),
                    np.append(prev_levels[keep], i).astype(np.int64),
                )
            self._segments[i] = table

        return self._segments[level]

    def evaluate(
        self, x: npt.ArrayLike, level: int
    ) -> Tuple[FloatArray, FloatArray, FloatArray, IntArray]:
        """
        Векторная оценка W(x, c_level) и её производных

        Returns:
            (значение, ∂x, ∂xx, активный уровень) для каждого x
        """
        xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
        if np.any(xs < 0):
            raise InvalidParameterError("Бюджет x не может быть отрицательным")

        breaks, levels = self.segments(level)
        idx = np.clip(np.searchsorted(breaks, xs, side="left") - 1, 0, None)
        active = levels[idx]

        rates = self.grid.as_array()[active]
        caps = (rates + self.params.lam) / self.params.q
        coeff = np.asarray(self.a_star)[active]
        theta = np.asarray(self.theta1)[active]

        decay = clamped_exp(theta * xs)
        value = caps * (1.0 - coeff * decay)
        slope = -caps * coeff * theta * decay
        curvature = theta * slope
        return value, slope, curvature, active
