"""
Use Case: Построение пороговой поверхности и проверка оптимальности

Решает поверхность, считает HJB-невязки, FOC по уровням, диапазон
коэффициентов, проверку препятствия и монотонность; собирает таблицы для
thresholds.csv, value_curve.csv, hjb_report.csv и сводку для summary.json.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import numpy.typing as npt
import pandas as pd

from ratchet_abatement.domain.benchmark.barrier import barrier_curve, optimal_barrier
from ratchet_abatement.domain.entities.model_params import ModelParams
from ratchet_abatement.domain.entities.value_surface import ValueSurface
from ratchet_abatement.domain.errors import NotApplicableError
from ratchet_abatement.domain.model.core_model import zero_threshold_bound
from ratchet_abatement.domain.threshold.solver import (
    TOL_X,
    build_grid,
    foc_residual,
    solve_surface,
)
from ratchet_abatement.domain.threshold.verification import (
    coefficient_band_violations,
    hjb_verify,
    level_monotonicity_ok,
    lipschitz_estimate,
    obstacle_check,
    threshold_inflection,
    threshold_monotonicity_violations,
    value_bounds,
)

logger = logging.getLogger(__name__)

# Относительный допуск FOC: |FOC| / K_i
FOC_RTOL = 1e-5

# Допуск доминирования замкнутой формы над нижним уровнем
OBSTACLE_TOL = 1e-10

FloatArray = npt.NDArray[np.float64]


def evaluation_grid(x_max: float, x_points: int) -> FloatArray:
    """Равномерная сетка x на [0, x_max]"""
    return np.linspace(0.0, x_max, x_points)


@dataclass
class SolveReport:
    """Результат решения: поверхность, таблицы и сводка"""

    surface: ValueSurface
    thresholds: pd.DataFrame
    value_curve: pd.DataFrame
    hjb: pd.DataFrame
    summary: Dict[str, Any]
    violations: List[str] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return not self.violations


class SolveSurfaceUseCase:
    """
    Use Case: Решение пороговой поверхности

    Проверки HJB, FOC, диапазона коэффициентов и препятствия дают список
    нарушений; монотонность z*(c) и точка перегиба - только диагностика.
    """

    def __init__(self, params: ModelParams, tol: float = 1e-8):
        self.params = params
        self.tol = tol

    def execute(self, grid_n: int, x_max: float = 10.0, x_points: int = 200) -> SolveReport:
        """
        Решает поверхность на сетке из grid_n интервалов и проверяет её

        Args:
            grid_n: Число интервалов сетки ставок
            x_max: Правая граница сетки x
            x_points: Число точек сетки x

        Returns:
            SolveReport с таблицами и сводкой
        """
        surface = solve_surface(self.params, build_grid(self.params.c_bar, grid_n))
        xs = evaluation_grid(x_max, x_points)

        thresholds = self._thresholds_frame(surface)
        hjb = self._hjb_frame(surface, xs)
        value_curve = self._value_curve_frame(surface, xs)

        violations: List[str] = []

        failed = hjb[hjb["violation"]]
        if not failed.empty:
            violations.append(f"HJB: {len(failed)} точек с нарушениями")

        foc_bad = thresholds[thresholds["foc_relative"] > FOC_RTOL]
        if not foc_bad.empty:
            violations.append(f"FOC: {len(foc_bad)} уровней с |FOC|/K > {FOC_RTOL:g}")

        band = coefficient_band_violations(surface)
        if band:
            violations.append(f"Диапазон коэффициентов нарушен на уровнях {band[:10]}")

        obstacle_min = min(
            (obstacle_check(surface, i, xs).min_excess for i in range(1, surface.solved_levels)),
            default=0.0,
        )
        if obstacle_min < -OBSTACLE_TOL:
            violations.append(f"Препятствие: min(U - W) = {obstacle_min:.3g}")

        if not level_monotonicity_ok(surface, xs):
            violations.append("W(x, c_i) убывает по уровню")

        low, high = value_bounds(surface, xs)
        if high > self.params.value_cap * (1.0 + 1e-12):
            violations.append(f"max W = {high:.17g} выше (c̄+Λ)/q")

        summary = self._summary(surface, xs, obstacle_min, (low, high))
        for message in violations:
            logger.warning("Проверка: %s", message)

        return SolveReport(
            surface=surface,
            thresholds=thresholds,
            value_curve=value_curve,
            hjb=hjb,
            summary=summary,
            violations=violations,
        )

    def _thresholds_frame(self, surface: ValueSurface) -> pd.DataFrame:
        """Кривая порогов (level_index, c_i, z_star, a_star, theta1) и FOC по уровням"""
        residuals: List[Optional[float]] = [None]
        for i in range(1, surface.solved_levels):
            try:
                residuals.append(foc_residual(surface, i))
            except NotApplicableError:
                residuals.append(None)

        caps = [surface.level_cap(i) for i in range(surface.solved_levels)]
        frame = pd.DataFrame(
            {
                "level_index": np.arange(surface.solved_levels),
                "c_i": surface.grid.rates[: surface.solved_levels],
                "z_star": surface.z_star,
                "a_star": surface.a_star,
                "theta1": surface.theta1,
                "foc_residual": [np.nan if r is None else r for r in residuals],
            }
        )
        frame["foc_relative"] = frame["foc_residual"].abs() / np.asarray(caps)
        return frame

    def _hjb_frame(self, surface: ValueSurface, xs: FloatArray) -> pd.DataFrame:
        reports = hjb_verify(surface, xs, tol=self.tol)
        return pd.DataFrame(
            {
                "level": [r.level for r in reports],
                "x": [r.x for r in reports],
                "generator_residual": [r.generator_residual for r in reports],
                "complementarity_gap": [
                    np.nan if r.complementarity_gap is None else r.complementarity_gap
                    for r in reports
                ],
                "classification": [r.classification.value for r in reports],
                "violation": [r.violation for r in reports],
            }
        )

    def _value_curve_frame(self, surface: ValueSurface, xs: FloatArray) -> pd.DataFrame:
        """V(x, c̄) на сетке x и эталон V_D для сравнения"""
        values = surface.evaluate(xs, surface.top_level)[0]
        frame = pd.DataFrame({"x": xs, "value": values})
        barrier = optimal_barrier(self.params)
        frame["barrier_value"] = barrier_curve(self.params, barrier.b, xs)[0]
        return frame

    def _summary(
        self,
        surface: ValueSurface,
        xs: FloatArray,
        obstacle_min: float,
        bounds: Tuple[float, float],
    ) -> Dict[str, Any]:
        region = zero_threshold_bound(self.params)
        positive = [i for i in range(1, surface.solved_levels) if surface.z_star[i] > TOL_X]
        zero_levels = [i for i in range(1, surface.solved_levels) if surface.z_star[i] <= TOL_X]
        lipschitz = lipschitz_estimate(surface, xs)

        inflection = threshold_inflection(surface)
        if inflection is None:
            logger.info("Перегиб z*(c) не обнаружен")
        elif abs(inflection - self.params.mu) > 0.1:
            logger.warning(
                "Перегиб z*(c) при c_e=%.4g, отличается от μ=%.4g более чем на 0.1",
                inflection,
                self.params.mu,
            )

        return {
            "n": surface.grid.n,
            "zero_threshold_region": region.describe(),
            "zero_threshold_levels": len(zero_levels),
            "positive_threshold_levels": len(positive),
            "all_thresholds_positive": len(positive) == surface.grid.n,
            "max_zero_threshold_rate": (
                surface.grid.rates[max(zero_levels)] if zero_levels else None
            ),
            "min_positive_threshold_rate": (
                surface.grid.rates[min(positive)] if positive else None
            ),
            "z_star_top": surface.z_star[-1],
            "value_range": list(bounds),
            "diagnostics": {
                "inflection_rate": inflection,
                "threshold_monotonicity_violations": threshold_monotonicity_violations(surface),
                "lipschitz_constant": lipschitz.constant,
                "lipschitz_negative_increments": lipschitz.negative_increments,
                "obstacle_min_excess": obstacle_min,
            },
        }
