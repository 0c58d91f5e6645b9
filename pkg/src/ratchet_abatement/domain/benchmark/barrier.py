"""
Барьерная стратегия без ограничения ratcheting (эталон V_D)

Ниже барьера b ставка 0, выше - c̄. Функция ценности склеивается из двух
решений уравнения L^c V = 0:

    (0, b):  K₀(1 - e^{α₁x}) + a₂(e^{α₂x} - e^{α₁x}),   α = θ(0), K₀ = Λ/q
    (b, ∞):  K₁ + B e^{β x},                              β = θ₁(c̄), K₁ = (c̄+Λ)/q

с непрерывностью значения и первой производной в b. Условие склейки
f(b) - f'(b)/β = K₁ определяет a₂. Оптимальный барьер удовлетворяет V'(b) = 1.

Все вычисления ведутся через s = a₂e^{α₂b}, чтобы при больших b не было
переполнения e^{α₂b}.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import numpy.typing as npt
from scipy.optimize import brentq, minimize_scalar

from ratchet_abatement.domain.entities.barrier import BarrierSolution
from ratchet_abatement.domain.entities.model_params import ModelParams
from ratchet_abatement.domain.entities.value_surface import clamped_exp
from ratchet_abatement.domain.errors import InvalidParameterError, OptimizationError
from ratchet_abatement.domain.model.core_model import characteristic_roots

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

# Точек сканирования барьера на [0, b_hi]
BARRIER_SCAN_POINTS = 400

MAX_DOUBLINGS = 40

# Допуск совпадения b* для двух опорных точек x_ref
CROSS_CHECK_TOL = 1e-5


@dataclass(frozen=True)
class _Pieces:
    """Коэффициенты склейки для фиксированного b"""

    b: float
    alpha1: float
    alpha2: float
    beta: float
    k_low: float
    k_high: float
    scaled: float  # s = a₂ e^{α₂ b}
    value_b: float
    slope_b: float
    curvature_b: float


def _pieces(params: ModelParams, b: float) -> _Pieces:
    params.require_diffusion()
    if not b >= 0:
        raise InvalidParameterError(f"Барьер b должен быть >= 0, получено {b}")

    low = characteristic_roots(params, 0.0)
    alpha1, alpha2 = low.theta1, low.theta2
    beta = characteristic_roots(params, params.c_bar).theta1
    k_low = params.lam / params.q
    k_high = params.value_cap

    e1 = math.exp(alpha1 * b)
    ratio = math.exp((alpha1 - alpha2) * b)

    base = k_low * (1.0 - e1) + k_low * alpha1 * e1 / beta
    denom = (1.0 - alpha2 / beta) - ratio * (1.0 - alpha1 / beta)
    scaled = (k_high - base) / denom

    value_b = k_low * (1.0 - e1) + scaled * (1.0 - ratio)
    slope_b = -k_low * alpha1 * e1 + scaled * (alpha2 - alpha1 * ratio)
    curvature_b = -k_low * alpha1**2 * e1 + scaled * (alpha2**2 - alpha1**2 * ratio)

    return _Pieces(
        b=b,
        alpha1=alpha1,
        alpha2=alpha2,
        beta=beta,
        k_low=k_low,
        k_high=k_high,
        scaled=scaled,
        value_b=value_b,
        slope_b=slope_b,
        curvature_b=curvature_b,
    )


def _profile(
    pieces: _Pieces, xs: FloatArray
) -> Tuple[FloatArray, FloatArray, FloatArray]:
    """(V, V', V'') на массиве x"""
    below = xs <= pieces.b
    xl = np.where(below, xs, pieces.b)
    xh = np.where(below, pieces.b, xs)

    a1, a2 = pieces.alpha1, pieces.alpha2
    e1 = clamped_exp(a1 * xl)
    e2 = clamped_exp(a2 * (xl - pieces.b))
    e12 = clamped_exp(a1 * xl - a2 * pieces.b)
    s, k0 = pieces.scaled, pieces.k_low

    low_v = k0 * (1.0 - e1) + s * (e2 - e12)
    low_d = -k0 * a1 * e1 + s * (a2 * e2 - a1 * e12)
    low_dd = -k0 * a1**2 * e1 + s * (a2**2 * e2 - a1**2 * e12)

    beta = pieces.beta
    tail = (pieces.slope_b / beta) * clamped_exp(beta * (xh - pieces.b))
    high_v = pieces.k_high + tail
    high_d = beta * tail
    high_dd = beta * high_d

    return (
        np.where(below, low_v, high_v),
        np.where(below, low_d, high_d),
        np.where(below, low_dd, high_dd),
    )


def barrier_solution(params: ModelParams, b: float) -> BarrierSolution:
    """Коэффициенты барьерной стратегии для заданного b (не обязательно оптимального)"""
    p = _pieces(params, b)
    with np.errstate(over="ignore", under="ignore"):
        coeff_low_2 = float(p.scaled * np.exp(-p.alpha2 * b))
        coeff_high = float((p.slope_b / p.beta) * np.exp(-p.beta * b))
    return BarrierSolution(
        b=b,
        coeff_low_1=-p.k_low - coeff_low_2,
        coeff_low_2=coeff_low_2,
        coeff_high=coeff_high,
        theta1_low=p.alpha1,
        theta2_low=p.alpha2,
        theta1_high=p.beta,
        smooth_fit_gap=p.beta * p.slope_b - p.curvature_b,
        slope_at_barrier=p.slope_b,
    )


def barrier_value(params: ModelParams, b: float, x: float) -> float:
    """
    Ценность стратегии «c̄ выше b, 0 ниже b» из бюджета x

    Raises:
        DegenerateVolatilityError: при sigma = 0
        InvalidParameterError: при b < 0 или x < 0
    """
    if not x >= 0:
        raise InvalidParameterError(f"Бюджет должен быть >= 0, получено {x}")
    return float(_profile(_pieces(params, b), np.array([x], dtype=np.float64))[0][0])


def barrier_curve(
    params: ModelParams, b: float, x_grid: npt.ArrayLike
) -> Tuple[FloatArray, FloatArray, FloatArray]:
    """Векторная оценка (V_D, V_D', V_D'') на сетке x"""
    xs = np.asarray(x_grid, dtype=np.float64)
    if np.any(xs < 0):
        raise InvalidParameterError("Сетка x не может содержать отрицательные бюджеты")
    return _profile(_pieces(params, b), xs)


def _maximize_on(
    params: ModelParams, x_ref: float, lo: float, hi: float
) -> Tuple[float, float]:
    """Ограниченный поиск максимума V_b(x_ref) по b ∈ [lo, hi]"""
    result = minimize_scalar(
        lambda b: -barrier_value(params, b, x_ref),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-10},
    )
    return float(result.x), -float(result.fun)


def optimal_barrier(params: ModelParams) -> BarrierSolution:
    """
    Оптимальный барьер b* без ограничения ratcheting

    Алгоритм:
    1. Удвоение b_hi, пока максимум скана V_b(b_hi + 1) не окажется внутри [0, b_hi]
    2. Ограниченный поиск в скобке вокруг лучшей точки скана
    3. Уточнение по условию гладкой склейки V'(b) = 1 (если в скобке есть корень)
    4. Перекрёстная проверка: максимум при x_ref/2 совпадает с b*

    Raises:
        DegenerateVolatilityError: при sigma = 0
        OptimizationError: если максимум уходит на бесконечность
    """
    params.require_diffusion()

    b_hi = 1.0
    for _ in range(MAX_DOUBLINGS):
        x_ref = b_hi + 1.0
        grid = np.linspace(0.0, b_hi, BARRIER_SCAN_POINTS + 1)
        values = np.array([barrier_value(params, b, x_ref) for b in grid])
        best = int(np.argmax(values))
        if best < BARRIER_SCAN_POINTS:
            break
        b_hi *= 2.0
    else:
        raise OptimizationError(
            f"Максимум V_b по барьеру не найден до b = {b_hi:.3g}: значение растёт с b"
        )

    lo = float(grid[max(best - 1, 0)])
    hi = float(grid[best + 1])
    b_star, v_star = _maximize_on(params, x_ref, lo, hi)
    if values[best] > v_star:
        b_star, v_star = float(grid[best]), float(values[best])

    def smooth_fit(b: float) -> float:
        return _pieces(params, b).slope_b - 1.0

    if lo < hi and smooth_fit(lo) * smooth_fit(hi) < 0:
        root = float(brentq(smooth_fit, lo, hi, xtol=1e-13))
        if barrier_value(params, root, x_ref) >= v_star - 1e-12:
            b_star = root

    check, _ = _maximize_on(params, x_ref / 2.0, lo, hi)
    if abs(check - b_star) > CROSS_CHECK_TOL * max(1.0, b_star):
        logger.warning(
            "b* зависит от опорной точки: %.10g при x_ref=%.4g, %.10g при x_ref=%.4g",
            b_star,
            x_ref,
            check,
            x_ref / 2.0,
        )

    solution = barrier_solution(params, b_star)
    logger.debug(
        "Оптимальный барьер b*=%.10g, V'(b*)=%.10g, скачок V''=%.3g",
        solution.b,
        solution.slope_at_barrier,
        solution.smooth_fit_gap,
    )
    return solution
