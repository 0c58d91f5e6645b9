"""
Доменная сущность: Параметры модели углеродного бюджета

Избыточный бюджет X_t = x + mu*t + sigma*W_t - int_0^t C_s ds,
выплата J = E[int_0^tau e^(-q s) (C_s + lam) ds].
"""

import math
from dataclasses import dataclass

from ratchet_abatement.domain.errors import (
    DegenerateVolatilityError,
    InvalidParameterError,
)


@dataclass(frozen=True)
class ModelParams:
    """Параметры (mu, sigma, q, Λ, c̄)"""

    mu: float  # Снос бюджета в единицу времени
    sigma: float  # Волатильность на sqrt(время)
    q: float  # Ставка дисконтирования
    lam: float  # Награда Λ за единицу времени, пока бюджет не исчерпан
    c_bar: float  # Максимальная ставка выбросов c̄

    def __post_init__(self) -> None:
        """Валидация"""
        for name in ("mu", "sigma", "q", "lam", "c_bar"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"Параметр {name} должен быть конечным")

        if self.q <= 0:
            raise InvalidParameterError("Ставка дисконтирования q должна быть > 0")

        if self.sigma < 0:
            raise InvalidParameterError("Волатильность sigma не может быть отрицательной")

        if self.c_bar <= 0:
            raise InvalidParameterError("Максимальная ставка c_bar должна быть > 0")

        if self.lam < 0:
            raise InvalidParameterError("Награда lam не может быть отрицательной")

    @property
    def is_degenerate(self) -> bool:
        """Детерминированный режим sigma = 0?"""
        return self.sigma == 0.0

    @property
    def value_cap(self) -> float:
        """Верхняя граница (c̄ + Λ)/q для любой функции ценности"""
        return (self.c_bar + self.lam) / self.q

    def require_diffusion(self) -> None:
        """Отклоняет вырожденный режим для диффузионных операций"""
        if self.is_degenerate:
            raise DegenerateVolatilityError(
                "sigma = 0: используйте deterministic_limit_value"
            )


@dataclass(frozen=True)
class Roots:
    """Корни характеристического уравнения (σ²/2)θ² + (μ−c)θ − q = 0"""

    theta1: float  # Отрицательный корень
    theta2: float  # Положительный корень

    def __post_init__(self) -> None:
        if not self.theta1 < 0 < self.theta2:
            raise InvalidParameterError(
                f"Ожидалось theta1 < 0 < theta2, получено ({self.theta1}, {self.theta2})"
            )
