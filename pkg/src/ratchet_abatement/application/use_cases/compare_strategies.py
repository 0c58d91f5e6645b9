"""
Use Case: Сравнение стратегий

Оптимальная ratcheting-стратегия (аналитически и MC), барьер без ratcheting
(аналитически), линейное снижение (MC), постоянная c̄ (аналитически и MC) и
нулевые выбросы (аналитически). Относительная эффективность - отношение
ценности стратегии к ценности барьера.
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ratchet_abatement.application.use_cases.simulate_strategy import (
    SimulateStrategyUseCase,
    build_strategy,
)
from ratchet_abatement.domain.entities.model_params import ModelParams
from ratchet_abatement.domain.entities.monte_carlo import McConfig
from ratchet_abatement.domain.errors import InvalidParameterError
from ratchet_abatement.domain.threshold.solver import build_grid, solve_surface

logger = logging.getLogger(__name__)

DEFAULT_STRATEGIES = ("multi_threshold", "barrier", "linear", "constant", "no_emission")

# Стратегии, для которых MC не запускается (значение точное)
ANALYTIC_ONLY = ("barrier", "no_emission")

# Порядок ценностей, который должен соблюдаться в каждой таблице
VALUE_ORDER = ("no_emission", "linear", "multi_threshold", "barrier")

# Имя параметра в конфигурации -> поле ModelParams
SWEEPABLE = {"mu": "mu", "lambda": "lam", "lam": "lam", "sigma": "sigma", "q": "q", "c_bar": "c_bar"}

COLUMNS = [
    "strategy",
    "analytic_value",
    "mc_value",
    "half_width_95",
    "depletion_time",
    "depletion_half_width_95",
    "censored_fraction",
    "relative_efficiency",
]


@dataclass
class ComparisonReport:
    """Таблица сравнения и диагностика порядка ценностей"""

    table: pd.DataFrame
    threshold_curves: pd.DataFrame
    diagnostics: Dict[str, Any] = field(default_factory=dict)


class CompareStrategiesUseCase:
    """
    Use Case: Сравнение стратегий из одного бюджета x0

    Поверхность решается один раз и используется и для аналитической
    ценности, и для MC пороговой политики.
    """

    def __init__(
        self,
        cfg: McConfig,
        grid_n: int = 500,
        workers: int = 1,
        strategies: Sequence[str] = DEFAULT_STRATEGIES,
        options: Optional[Dict[str, Dict[str, Any]]] = None,
    ):
        if not strategies:
            raise InvalidParameterError("Список стратегий для сравнения пуст")
        self.cfg = cfg
        self.grid_n = grid_n
        self.workers = workers
        self.strategies = list(strategies)
        self.options = options or {}

    def execute(self, params: ModelParams, x0: float) -> ComparisonReport:
        """Таблица сравнения для одного набора параметров"""
        params.require_diffusion()
        surface = solve_surface(params, build_grid(params.c_bar, self.grid_n))
        simulator = SimulateStrategyUseCase(params, self.cfg, self.workers)

        barrier = build_strategy("barrier", params, x0, self.grid_n, self.options.get("barrier"))
        reference = barrier.analytic_value

        rows: List[Dict[str, Any]] = []
        for name in self.strategies:
            choice = build_strategy(
                name, params, x0, self.grid_n, self.options.get(name), surface=surface
            )
            row: Dict[str, Any] = {column: np.nan for column in COLUMNS}
            row["strategy"] = name
            if choice.analytic_value is not None:
                row["analytic_value"] = choice.analytic_value

            if name not in ANALYTIC_ONLY:
                report = simulator.execute(choice, x0)
                row["mc_value"] = report.value.mean
                row["half_width_95"] = report.value.half_width_95
                row["depletion_time"] = report.depletion.mean
                row["depletion_half_width_95"] = report.depletion.half_width_95
                row["censored_fraction"] = report.depletion.censored_fraction

            value = row["analytic_value"] if choice.analytic_value is not None else row["mc_value"]
            if reference:
                row["relative_efficiency"] = value / reference
            rows.append(row)

        table = pd.DataFrame(rows, columns=COLUMNS)
        curves = pd.DataFrame(
            {
                "level_index": np.arange(surface.solved_levels),
                "c_i": surface.grid.rates,
                "z_star": surface.z_star,
            }
        )
        return ComparisonReport(table=table, threshold_curves=curves, diagnostics=_diagnostics(table))

    def execute_sweep(
        self, params: ModelParams, x0: float, parameter: str, values: Sequence[float]
    ) -> ComparisonReport:
        """
        Сравнение для каждого значения параметра parameter

        Таблицы и кривые порогов объединяются с ключом sweep_value.
        """
        if parameter not in SWEEPABLE:
            raise InvalidParameterError(
                f"Параметр {parameter} нельзя перебирать. Доступны: {sorted(SWEEPABLE)}"
            )
        if not values:
            raise InvalidParameterError("Пустой список значений для перебора")

        tables, curves = [], []
        diagnostics: Dict[str, Any] = {}
        for value in values:
            swept = dataclasses.replace(params, **{SWEEPABLE[parameter]: float(value)})
            report = self.execute(swept, x0)
            tables.append(report.table.assign(sweep_parameter=parameter, sweep_value=float(value)))
            curves.append(
                report.threshold_curves.assign(sweep_parameter=parameter, sweep_value=float(value))
            )
            diagnostics[repr(float(value))] = report.diagnostics
            logger.info("Перебор %s=%g завершён", parameter, value)

        return ComparisonReport(
            table=pd.concat(tables, ignore_index=True),
            threshold_curves=pd.concat(curves, ignore_index=True),
            diagnostics=diagnostics,
        )


def _diagnostics(table: pd.DataFrame) -> Dict[str, Any]:
    """Порядок ценностей и относительные разрывы (только отчёт)"""
    by_name = table.set_index("strategy")
    values: Dict[str, float] = {}
    half_widths: Dict[str, float] = {}
    for name, row in by_name.iterrows():
        analytic, spread = float(row["analytic_value"]), float(row["half_width_95"])
        if np.isnan(analytic):
            values[str(name)] = float(row["mc_value"])
            half_widths[str(name)] = 0.0 if np.isnan(spread) else spread
        else:
            values[str(name)] = analytic
            half_widths[str(name)] = 0.0

    present = [name for name in VALUE_ORDER if name in values]
    ordering_ok = all(
        values[a] <= values[b] + half_widths[a] + half_widths[b]
        for a, b in zip(present, present[1:])
    )
    if not ordering_ok:
        logger.warning("Нарушен порядок ценностей стратегий: %s", values)

    result: Dict[str, Any] = {"ordering_ok": ordering_ok}
    if "multi_threshold" in values and "linear" in values and values["multi_threshold"] > 0:
        result["linear_shortfall"] = 1.0 - values["linear"] / values["multi_threshold"]
    if "multi_threshold" in values and "barrier" in values:
        result["ratcheting_gap"] = values["barrier"] - values["multi_threshold"]
    return result


def compare_strategies(
    params: ModelParams, x0: float, cfg: McConfig, grid_n: int = 500, workers: int = 1
) -> pd.DataFrame:
    """Таблица сравнения стратегий по умолчанию"""
    return CompareStrategiesUseCase(cfg, grid_n, workers).execute(params, x0).table
