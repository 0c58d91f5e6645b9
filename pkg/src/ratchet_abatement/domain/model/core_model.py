"""
Базовая модель: характеристические корни, генератор L^c и замкнутые формулы
функций ценности при постоянной ставке

Генератор стратегии с постоянной ставкой c:

    L^c(W) = (σ²/2) W'' + (μ - c) W' - q W + c + Λ

Ограниченные решения L^c(W) = 0 с пределом (c+Λ)/q имеют вид
(c+Λ)/q + a e^{θ₁(c) x}, где θ₁(c) < 0 < θ₂(c) - корни
(σ²/2)θ² + (μ - c)θ - q = 0.
"""

import math
from typing import Tuple, TypeVar, Union

import numpy as np
import numpy.typing as npt

from ratchet_abatement.domain.entities.model_params import ModelParams, Roots
from ratchet_abatement.domain.entities.value_surface import EXP_UNDERFLOW
from ratchet_abatement.domain.entities.zero_threshold import (
    AllRatesZeroThreshold,
    NoZeroInterval,
    ZeroThresholdRegion,
    ZeroUpTo,
)
from ratchet_abatement.domain.errors import (
    DegenerateVolatilityError,
    InvalidParameterError,
)

Numeric = TypeVar("Numeric", float, npt.NDArray[np.float64])


def _exp_clamped(arg: float) -> float:
    """e^arg с обнулением при arg < -745"""
    return 0.0 if arg < EXP_UNDERFLOW else math.exp(arg)


def _check_rate(c: float) -> None:
    if not c >= 0:
        raise InvalidParameterError(f"Ставка выбросов должна быть >= 0, получено {c}")


def _check_budget(x: float) -> None:
    if not x >= 0:
        raise InvalidParameterError(f"Бюджет должен быть >= 0, получено {x}")


def characteristic_roots(params: ModelParams, c: float) -> Roots:
    """
    Корни θ₁(c) < 0 < θ₂(c) характеристического уравнения оператора L^c

    Корень меньшего модуля вычисляется через сопряжённую форму
    θ₁θ₂ = -2q/σ², что исключает вычитание близких чисел при |c - μ| >> σ.

    Raises:
        DegenerateVolatilityError: при sigma = 0
    """
    params.require_diffusion()
    _check_rate(c)

    variance = params.sigma**2
    drift_gap = c - params.mu
    root_disc = math.hypot(drift_gap, params.sigma * math.sqrt(2.0 * params.q))

    if drift_gap >= 0:
        theta2 = (drift_gap + root_disc) / variance
        theta1 = -2.0 * params.q / (drift_gap + root_disc)
    else:
        theta1 = (drift_gap - root_disc) / variance
        theta2 = 2.0 * params.q / (root_disc - drift_gap)

    return Roots(theta1=theta1, theta2=theta2)


def constant_rate_value(params: ModelParams, c: float, x: float) -> float:
    """
    W^c(x) = ((c+Λ)/q)(1 - e^{θ₁(c)x}) - ценность постоянной ставки c до исчерпания

    Строго возрастает, строго вогнута и ограничена сверху (c+Λ)/q.
    """
    return constant_rate_derivatives(params, c, x)[0]


def constant_rate_derivatives(
    params: ModelParams, c: float, x: float
) -> Tuple[float, float, float]:
    """(W^c(x), ∂x W^c(x), ∂xx W^c(x)) в замкнутой форме"""
    _check_budget(x)
    theta1 = characteristic_roots(params, c).theta1
    cap = (c + params.lam) / params.q
    decay = _exp_clamped(theta1 * x)
    slope = -cap * theta1 * decay
    return cap * (1.0 - decay), slope, theta1 * slope


def no_emission_value(params: ModelParams, x: float) -> float:
    """(Λ/q)(1 - e^{θ₁(0)x}) - ценность стратегии без выбросов"""
    return constant_rate_value(params, 0.0, x)


def zero_threshold_bound(params: ModelParams) -> ZeroThresholdRegion:
    """
    Область ставок, для которых оптимальный порог равен нулю

    Returns:
        AllRatesZeroThreshold при Λ+μ <= 0;
        ZeroUpTo((μ²+2qσ²-Λ²)/(2(Λ+μ))) при Λ+μ > 0 и Λ <= sqrt(μ²+2qσ²);
        NoZeroInterval иначе
    """
    base = params.mu**2 + 2.0 * params.q * params.sigma**2
    if params.lam + params.mu <= 0:
        return AllRatesZeroThreshold()
    if params.lam <= math.sqrt(base):
        return ZeroUpTo((base - params.lam**2) / (2.0 * (params.lam + params.mu)))
    return NoZeroInterval()


def deterministic_limit_value(params: ModelParams, x: float, c: float) -> float:
    """
    Функция ценности при sigma = 0 и mu >= 0

    При c <= μ бюджет не исчерпывается: (c+Λ)/q. При c > μ ставка c держится
    до нуля бюджета в момент x/(c-μ), затем снижается до μ навсегда:
    (c+Λ)/q - ((c-μ)/q) e^{-qx/(c-μ)}.

    Raises:
        DegenerateVolatilityError: при sigma > 0
        InvalidParameterError: при mu < 0
    """
    if not params.is_degenerate:
        raise DegenerateVolatilityError(
            "sigma > 0: детерминированный предел не применим, используйте диффузионный решатель"
        )
    if params.mu < 0:
        raise InvalidParameterError("Детерминированный предел определён только при mu >= 0")
    _check_budget(x)
    _check_rate(c)

    cap = (c + params.lam) / params.q
    if c <= params.mu:
        return cap
    excess = c - params.mu
    return cap - (excess / params.q) * _exp_clamped(-params.q * x / excess)


def generator_apply(
    params: ModelParams,
    c: float,
    v: Numeric,
    vx: Numeric,
    vxx: Numeric,
) -> Numeric:
    """L^c невязка: (σ²/2)vxx + (μ-c)vx - qv + c + Λ"""
    residual: Numeric = (
        0.5 * params.sigma**2 * vxx
        + (params.mu - c) * vx
        - params.q * v
        + (c + params.lam)
    )
    return residual


def closed_form_profile(
    params: ModelParams, c: float, coeff: float, x: Union[float, npt.NDArray[np.float64]]
) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """U_a(x) = ((c+Λ)/q)(1 - a e^{θ₁(c)x}) и её производная (векторно)"""
    theta1 = characteristic_roots(params, c).theta1
    xs = np.asarray(x, dtype=np.float64)
    cap = (c + params.lam) / params.q
    arg = theta1 * xs
    decay = np.where(arg < EXP_UNDERFLOW, 0.0, np.exp(np.maximum(arg, EXP_UNDERFLOW)))
    return cap * (1.0 - coeff * decay), -cap * coeff * theta1 * decay
