"""
Доменная сущность: Решение барьерной задачи без ограничения ratcheting
"""

from dataclasses import dataclass

from ratchet_abatement.domain.errors import InvalidParameterError


# pylint: disable=too-many-instance-attributes
@dataclass(frozen=True)
class BarrierSolution:
    """
    Барьерная стратегия: выбросы c̄ выше b, ноль ниже b

    Значение ниже барьера: Λ/q + coeff_low_1 e^{θ₁(0)x} + coeff_low_2 e^{θ₂(0)x},
    выше барьера: (c̄+Λ)/q + coeff_high e^{θ₁(c̄)x}.
    """

    b: float
    coeff_low_1: float
    coeff_low_2: float
    coeff_high: float
    theta1_low: float
    theta2_low: float
    theta1_high: float
    smooth_fit_gap: float = 0.0  # V''(b+) - V''(b-)
    slope_at_barrier: float = 0.0  # V'(b), равна 1 в оптимуме

    def __post_init__(self) -> None:
        if self.b < 0:
            raise InvalidParameterError("Барьер b не может быть отрицательным")
