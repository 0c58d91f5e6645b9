"""
Рекурсивный решатель пороговой поверхности

Уровни решаются по возрастанию ставки. На уровне i порог z*(c_i) - наименьший
глобальный минимизатор

    G_i(y) = (1 - W(y, c_{i-1}) / K_i) e^{-θ₁(c_i) y},   K_i = (c_i + Λ)/q,

а коэффициент a*(c_i) = G_i(z*(c_i)). G_i лишь кусочно гладкая (изломы второй
производной в порогах нижних уровней), поэтому унимодальные методы
применяются только внутри скобки, найденной грубым сканированием.

Знак G_i'(y) совпадает со знаком FOC(y) = θ₁W - W' - θ₁K_i, где W и W' берутся
с уровня i-1. Корень FOC внутри скобки уточняет минимум методом Брента.
"""

import logging
import math
from typing import Callable, List, Tuple

import numpy as np
import numpy.typing as npt
from scipy.optimize import brentq, minimize_scalar

from ratchet_abatement.domain.entities.model_params import ModelParams
from ratchet_abatement.domain.entities.rate_grid import RateGrid
from ratchet_abatement.domain.entities.value_surface import ValueSurface
from ratchet_abatement.domain.errors import (
    BracketError,
    InvalidParameterError,
    LevelOrderError,
    NotApplicableError,
    RatchetError,
    SolverError,
)
from ratchet_abatement.domain.model.core_model import (
    characteristic_roots,
    zero_threshold_bound,
)

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

# Точность порога
TOL_X = 1e-8

# Число интервалов грубого сканирования на [0, x_hi]
SCAN_INTERVALS = 2000

# Предел удвоений x_hi (2^60 единиц бюджета)
MAX_DOUBLINGS = 60

# Точка проверки неубывания G_i у нуля при аналитически нулевом пороге
ZERO_OFFSET = 1e-6


def build_grid(c_bar: float, n: int) -> RateGrid:
    """
    Равномерная сетка ставок {0, c̄/n, ..., c̄}

    Raises:
        InvalidParameterError: при n < 1 или c_bar <= 0
    """
    return RateGrid.uniform(c_bar, n)


def _level_constants(surface: ValueSurface, i: int) -> Tuple[float, float]:
    """(K_i, θ₁(c_i)) для уровня i"""
    if i < 1 or i > surface.grid.n:
        raise LevelOrderError(f"Уровень {i} вне диапазона 1..{surface.grid.n}")
    if i - 1 >= surface.solved_levels:
        raise LevelOrderError(
            f"G_{i} требует решённого уровня {i - 1}, решено {surface.solved_levels}"
        )
    c_i = surface.rate(i)
    cap = (c_i + surface.params.lam) / surface.params.q
    return cap, characteristic_roots(surface.params, c_i).theta1


def _gi_values(
    surface: ValueSurface, i: int, cap: float, theta: float, ys: FloatArray
) -> FloatArray:
    lower = surface.evaluate(ys, i - 1)[0]
    with np.errstate(over="ignore"):
        growth = np.exp(-theta * ys)
    values: FloatArray = (1.0 - lower / cap) * growth
    return values


def _foc_values(
    surface: ValueSurface, i: int, cap: float, theta: float, ys: FloatArray
) -> FloatArray:
    lower, slope, _, _ = surface.evaluate(ys, i - 1)
    values: FloatArray = theta * lower - slope - theta * cap
    return values


def gi_evaluate(surface: ValueSurface, i: int, y: float) -> float:
    """
    Значение целевой функции G_i(y)

    Args:
        surface: Поверхность, решённая как минимум до уровня i-1
        i: Уровень >= 1
        y: Кандидат в пороги, y >= 0

    Returns:
        G_i(y) > 0; G_i(0) = 1

    Raises:
        LevelOrderError: если уровень i-1 ещё не решён
    """
    if not y >= 0:
        raise InvalidParameterError(f"Кандидат в пороги должен быть >= 0, получено {y}")
    cap, theta = _level_constants(surface, i)
    return float(_gi_values(surface, i, cap, theta, np.array([y], dtype=np.float64))[0])


def _scan(
    objective: Callable[[FloatArray], FloatArray], x_hi: float, tol_x: float
) -> Tuple[FloatArray, FloatArray]:
    step = max(tol_x, x_hi / SCAN_INTERVALS)
    ys = np.linspace(0.0, x_hi, int(math.ceil(x_hi / step)) + 1)
    return ys, objective(ys)


def minimize_gi(
    surface: ValueSurface, i: int, tol_x: float = TOL_X
) -> Tuple[float, float]:
    """
    Наименьший глобальный минимизатор G_i на [0, ∞)

    Алгоритм:
    1. Если c_i в области нулевого порога - (0, 1) без поиска
    2. Удвоение x_hi от 1, пока G_i(x_hi) > 2 min G_i на скане [0, x_hi]
    3. Скан с шагом max(tol_x, x_hi/2000), скобка вокруг лучшей точки
    4. Ограниченный поиск минимума в скобке и корень FOC методом Брента
    5. Из кандидатов берётся минимальный G_i, при равенстве - меньший y

    Returns:
        (z*(c_i), a*(c_i))

    Raises:
        LevelOrderError: если нижние уровни не решены
        BracketError: если скобка не найдена за MAX_DOUBLINGS удвоений
    """
    cap, theta = _level_constants(surface, i)
    c_i = surface.rate(i)

    def objective(ys: FloatArray) -> FloatArray:
        return _gi_values(surface, i, cap, theta, ys)

    def scalar_objective(y: float) -> float:
        return float(objective(np.array([y], dtype=np.float64))[0])

    if zero_threshold_bound(surface.params).covers(c_i):
        just_above = scalar_objective(ZERO_OFFSET)
        if just_above < 1.0:
            logger.warning(
                "Уровень %d (c=%.6g): нулевой порог, но G(%.0e)=%.17g < 1",
                i,
                c_i,
                ZERO_OFFSET,
                just_above,
            )
        return 0.0, 1.0

    x_hi = 1.0
    for _ in range(MAX_DOUBLINGS):
        ys, values = _scan(objective, x_hi, tol_x)
        best = int(np.argmin(values))
        if values[-1] > 2.0 * values[best]:
            break
        x_hi *= 2.0
    else:
        raise BracketError(
            f"Уровень {i} (c={c_i:.6g}): G_i не превысила 2·min до x_hi={x_hi:.3g}"
        )

    lo = float(ys[max(best - 1, 0)])
    hi = float(ys[min(best + 1, len(ys) - 1)])
    candidates: List[Tuple[float, float]] = [(float(values[best]), float(ys[best]))]

    refined = minimize_scalar(
        scalar_objective, bounds=(lo, hi), method="bounded", options={"xatol": tol_x}
    )
    candidates.append((float(refined.fun), float(refined.x)))

    foc_lo, foc_hi = _foc_values(surface, i, cap, theta, np.array([lo, hi]))
    if foc_lo < 0.0 < foc_hi:
        root = brentq(
            lambda y: float(_foc_values(surface, i, cap, theta, np.array([y]))[0]),
            lo,
            hi,
            xtol=1e-12,
        )
        candidates.append((scalar_objective(root), float(root)))

    a_star, z_star = min(candidates)
    logger.debug(
        "Уровень %d (c=%.6g): x_hi=%.3g, скобка [%.6g, %.6g], z*=%.10g, a*=%.10g",
        i,
        c_i,
        x_hi,
        lo,
        hi,
        z_star,
        a_star,
    )
    if z_star == 0.0:
        return 0.0, 1.0
    return z_star, a_star


def solve_surface(
    params: ModelParams, grid: RateGrid, tol_x: float = TOL_X
) -> ValueSurface:
    """
    Строит пороговую поверхность по возрастанию уровней

    Уровень 0 - стратегия без выбросов (z = 0, a = 1). Каждый следующий уровень
    хранит (z*, a*) из minimize_gi.

    Raises:
        DegenerateVolatilityError: при sigma = 0
        InvalidParameterError: если c̄ сетки не совпадает с c̄ модели
        SolverError: сбой уровня i (с индексом уровня)
    """
    params.require_diffusion()
    if grid.c_bar != params.c_bar:
        raise InvalidParameterError(
            f"c̄ сетки ({grid.c_bar}) не совпадает с c̄ модели ({params.c_bar})"
        )

    surface = ValueSurface(
        params=params,
        grid=grid,
        z_star=(0.0,),
        a_star=(1.0,),
        theta1=(characteristic_roots(params, 0.0).theta1,),
    )

    for i in range(1, grid.n + 1):
        try:
            z_star, a_star = minimize_gi(surface, i, tol_x)
            theta = characteristic_roots(params, grid.rates[i]).theta1
        except (RatchetError, ArithmeticError, ValueError) as exc:
            raise SolverError(i, exc) from exc
        surface = surface.extended(z_star, a_star, theta)

    positive = sum(1 for z in surface.z_star if z > 0)
    logger.info(
        "Поверхность решена: n=%d, положительных порогов %d, z*(c̄)=%.6g",
        grid.n,
        positive,
        surface.z_star[-1],
    )
    return surface


def surface_eval(surface: ValueSurface, x: float, i: int) -> Tuple[float, float]:
    """
    (W(x, c_i), ∂x W(x, c_i)) спуском по уровням

    Raises:
        LevelOrderError: если уровень i вне сетки или не решён
        InvalidParameterError: при x < 0
    """
    value, slope, _, _ = surface.evaluate(x, i)
    return float(value[0]), float(slope[0])


def surface_value_at_rate(
    surface: ValueSurface, x: npt.ArrayLike, c: float
) -> FloatArray:
    """
    Кусочно-постоянное продолжение V^n(x, c) = W(x, c̃), c̃ - наибольшая ставка сетки <= c
    """
    if c > surface.grid.c_bar:
        raise InvalidParameterError(f"Ставка {c} выше c̄ = {surface.grid.c_bar}")
    return surface.evaluate(x, surface.grid.level_at_or_below(c))[0]


def foc_residual(surface: ValueSurface, i: int, tol_x: float = TOL_X) -> float:
    """
    Невязка условия первого порядка в z*(c_i)

    θ₁(c_i)W(z*, c_{i-1}) - ∂xW(z*, c_{i-1}) - θ₁(c_i)(c_i+Λ)/q

    Raises:
        NotApplicableError: при z*(c_i) <= tol_x (условие - неравенство)
        LevelOrderError: если уровень не решён
    """
    if i < 1:
        raise NotApplicableError("У уровня 0 нет порога")
    surface.require_level(i)
    z_star = surface.z_star[i]
    if z_star <= tol_x:
        raise NotApplicableError(f"Уровень {i}: нулевой порог, FOC не применимо")
    return float(
        _foc_values(
            surface,
            i,
            surface.level_cap(i),
            surface.theta1[i],
            np.array([z_star], dtype=np.float64),
        )[0]
    )
