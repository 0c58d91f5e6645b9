"""
Проверки оптимальности решённой поверхности

Результаты проверок - данные (отчёты и списки нарушений), а не исключения.
Решение об ошибке принимает вызывающий слой.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from scipy.signal import savgol_filter

from ratchet_abatement.domain.entities.value_surface import (
    HjbReport,
    RegionClass,
    ValueSurface,
)
from ratchet_abatement.domain.errors import InvalidParameterError
from ratchet_abatement.domain.model.core_model import (
    closed_form_profile,
    generator_apply,
)
from ratchet_abatement.domain.threshold.solver import TOL_X

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

# Допуск невязки генератора (абсолютный)
GENERATOR_TOL = 1e-8

# Допуск разрыва W(x, c_i) - W(x, c_{i-1}) в области снижения
GAP_TOL = 1e-10

# Минимальная длина положительного участка z*(c) для оценки перегиба
MIN_INFLECTION_POINTS = 5


@dataclass(frozen=True)
class ObstacleReport:
    """Проверка через задачу с препятствием для уровня i"""

    level: int
    min_excess: float  # min_x U_{a*}(x) - W(x, c_{i-1})
    contact_gap: Optional[float]  # U_{a*}(z*) - W(z*, c_{i-1}), None при z* = 0


@dataclass(frozen=True)
class LipschitzReport:
    """Оценка константы K совместной липшицевости V(x, c)"""

    constant: float
    negative_increments: int  # число убывающих приращений по x или c


def _as_grid(x_grid: Sequence[float]) -> FloatArray:
    xs = np.asarray(x_grid, dtype=np.float64)
    if xs.ndim != 1 or xs.size == 0:
        raise InvalidParameterError("Сетка x должна быть непустым одномерным массивом")
    if np.any(xs < 0):
        raise InvalidParameterError("Сетка x не может содержать отрицательные бюджеты")
    return xs


def hjb_verify(
    surface: ValueSurface,
    x_grid: Sequence[float],
    tol: float = GENERATOR_TOL,
    gap_tol: float = GAP_TOL,
) -> List[HjbReport]:
    """
    Невязки дискретного уравнения max{L^{c_i}W_i, W_{i-1} - W_i} = 0

    Для x > z*(c_i) - область выбросов: |L^{c_i}W_i| <= tol и W_i >= W_{i-1}.
    Для x < z*(c_i) - область снижения: W_i = W_{i-1} и L^{c_i}W_{i-1} <= tol.
    Уровень 0 целиком - область выбросов со ставкой 0.

    Returns:
        Отчёт для каждой пары (уровень, x), уровни по возрастанию
    """
    xs = _as_grid(x_grid)
    params = surface.params
    reports: List[HjbReport] = []

    value, slope, curvature, _ = surface.evaluate(xs, 0)
    residual = generator_apply(params, 0.0, value, slope, curvature)
    for x, res in zip(xs, residual):
        reports.append(
            HjbReport(
                level=0,
                x=float(x),
                generator_residual=float(res),
                complementarity_gap=None,
                classification=RegionClass.EMIT,
                violation=bool(abs(res) > tol),
            )
        )

    for i in range(1, surface.solved_levels):
        c_i = surface.rate(i)
        z_star = surface.z_star[i]
        value_prev = value
        value, slope, curvature, _ = surface.evaluate(xs, i)
        residual = generator_apply(params, c_i, value, slope, curvature)
        gap = value - value_prev

        for x, res, diff in zip(xs, residual, gap):
            if x > z_star:
                region = RegionClass.EMIT
                violation = abs(res) > tol or diff < -gap_tol
            elif x < z_star:
                region = RegionClass.REDUCE
                violation = abs(diff) > gap_tol or res > tol
            else:
                region = RegionClass.BOUNDARY
                violation = abs(diff) > gap_tol
            reports.append(
                HjbReport(
                    level=i,
                    x=float(x),
                    generator_residual=float(res),
                    complementarity_gap=float(diff),
                    classification=region,
                    violation=bool(violation),
                )
            )

    failed = sum(1 for report in reports if report.violation)
    if failed:
        logger.warning("HJB: %d нарушений из %d точек", failed, len(reports))
    else:
        logger.debug("HJB: все %d точек без нарушений", len(reports))
    return reports


def threshold_inflection(surface: ValueSurface) -> Optional[float]:
    """
    Оценка ставки c_e, где z*(c) переходит от выпуклости к вогнутости

    Вторая производная берётся фильтром Савицкого-Голея на самом длинном
    участке подряд идущих положительных порогов. Из переходов знака «+ → -»
    выбирается переход с наибольшим перепадом.

    Returns:
        Интерполированная ставка перехода или None
    """
    thresholds = np.asarray(surface.z_star, dtype=np.float64)
    rates = surface.grid.as_array()[: surface.solved_levels]

    best_start, best_len, start = 0, 0, None
    for k, z in enumerate(np.append(thresholds, 0.0)):
        if z > 0 and start is None:
            start = k
        elif z <= 0 and start is not None:
            if k - start > best_len:
                best_start, best_len = start, k - start
            start = None

    if best_len < MIN_INFLECTION_POINTS:
        return None

    run_z = thresholds[best_start : best_start + best_len]
    run_c = rates[best_start : best_start + best_len]
    window = min(max(5, (best_len // 20) * 2 + 1), best_len - (1 - best_len % 2))
    polyorder = min(3, window - 1)
    delta = float(np.mean(np.diff(run_c)))
    second = savgol_filter(run_z, window, polyorder, deriv=2, delta=delta)

    crossings = np.flatnonzero((second[:-1] > 0) & (second[1:] <= 0))
    if crossings.size == 0:
        return None

    k = int(crossings[np.argmax(second[crossings] - second[crossings + 1])])
    weight = second[k] / (second[k] - second[k + 1])
    return float(run_c[k] + weight * (run_c[k + 1] - run_c[k]))


def coefficient_band_violations(surface: ValueSurface) -> List[int]:
    """
    Уровни, нарушающие 0 < a* <= e^{-θ₁z*}

    Верхняя граница равносильна W(z*, c_{i-1}) >= 0 и строга при z* > 0.
    """
    bad: List[int] = []
    for i in range(1, surface.solved_levels):
        a, z, theta = surface.a_star[i], surface.z_star[i], surface.theta1[i]
        scaled = a * np.exp(theta * z)
        if not a > 0 or scaled > 1.0 or (z > 0 and scaled >= 1.0):
            bad.append(i)
    return bad


def coefficient_band_ok(surface: ValueSurface) -> bool:
    return not coefficient_band_violations(surface)


def obstacle_check(
    surface: ValueSurface, i: int, x_grid: Sequence[float]
) -> ObstacleReport:
    """
    Замкнутая форма уровня i доминирует W(·, c_{i-1}) и касается её в z*

    U_{a*}(x) = ((c_i+Λ)/q)(1 - a* e^{θ₁(c_i)x}) >= W(x, c_{i-1}) на [0, ∞).
    """
    if i < 1:
        raise InvalidParameterError("Проверка препятствия определена для уровней >= 1")
    surface.require_level(i)
    xs = _as_grid(x_grid)
    params, c_i = surface.params, surface.rate(i)

    upper, _ = closed_form_profile(params, c_i, surface.a_star[i], xs)
    lower = surface.evaluate(xs, i - 1)[0]

    z_star = surface.z_star[i]
    contact: Optional[float] = None
    if z_star > 0:
        u_z, _ = closed_form_profile(params, c_i, surface.a_star[i], z_star)
        contact = float(u_z) - float(surface.evaluate(z_star, i - 1)[0][0])

    return ObstacleReport(level=i, min_excess=float(np.min(upper - lower)), contact_gap=contact)


def threshold_monotonicity_violations(
    surface: ValueSurface, tol: float = TOL_X
) -> List[int]:
    """Уровни i, где z*(c_i) < z*(c_{i-1}) (монотонность наблюдается, но не доказана)"""
    thresholds = surface.z_star
    bad = [i for i in range(1, len(thresholds)) if thresholds[i] < thresholds[i - 1] - tol]
    if bad:
        logger.warning("z*(c) убывает на %d уровнях, первый: %d", len(bad), bad[0])
    return bad


def _value_table(surface: ValueSurface, xs: FloatArray) -> FloatArray:
    """Матрица W(x_k, c_i): строки - уровни, столбцы - точки x"""
    return np.vstack([surface.evaluate(xs, i)[0] for i in range(surface.solved_levels)])


def lipschitz_estimate(surface: ValueSurface, x_grid: Sequence[float]) -> LipschitzReport:
    """
    Оценка K: 0 <= V(x₂,c₂) - V(x₁,c₁) <= K((x₂-x₁) + (c₂-c₁))

    Берётся максимум разностных отношений по x и по c на сетке.
    """
    xs = np.unique(_as_grid(x_grid))
    table = _value_table(surface, xs)
    rates = surface.grid.as_array()[: surface.solved_levels]

    ratios: List[FloatArray] = []
    if xs.size > 1:
        ratios.append(np.diff(table, axis=1) / np.diff(xs)[np.newaxis, :])
    if table.shape[0] > 1:
        ratios.append(np.diff(table, axis=0) / np.diff(rates)[:, np.newaxis])

    if not ratios:
        return LipschitzReport(constant=0.0, negative_increments=0)

    flat = np.concatenate([r.ravel() for r in ratios])
    return LipschitzReport(
        constant=float(np.max(np.abs(flat))),
        negative_increments=int(np.count_nonzero(flat < -1e-12)),
    )


def level_monotonicity_ok(
    surface: ValueSurface, x_grid: Sequence[float], tol: float = 1e-12
) -> bool:
    """W(x, c_i) >= W(x, c_{i-1}) для всех уровней и x из сетки"""
    table = _value_table(surface, _as_grid(x_grid))
    return bool(np.all(np.diff(table, axis=0) >= -tol))


def value_bounds(surface: ValueSurface, x_grid: Sequence[float]) -> Tuple[float, float]:
    """(min, max) W(x, c_top) на сетке; max не превосходит (c̄+Λ)/q"""
    values = surface.evaluate(_as_grid(x_grid), surface.top_level)[0]
    return float(np.min(values)), float(np.max(values))
