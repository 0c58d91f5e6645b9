"""
Use Case: Monte Carlo оценка стратегии выбросов
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import pandas as pd

from ratchet_abatement.domain.benchmark.barrier import barrier_value, optimal_barrier
from ratchet_abatement.domain.entities.model_params import ModelParams
from ratchet_abatement.domain.entities.monte_carlo import McConfig, McEstimate
from ratchet_abatement.domain.entities.value_surface import ValueSurface
from ratchet_abatement.domain.model.core_model import (
    constant_rate_value,
    no_emission_value,
)
from ratchet_abatement.domain.simulation.monte_carlo import (
    linear_schedule,
    run_simulation,
    summarize_depletion,
    summarize_payoffs,
    trace_path,
)
from ratchet_abatement.domain.strategies import EmissionStrategy, StrategyFactory
from ratchet_abatement.domain.threshold.solver import build_grid, solve_surface, surface_eval

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StrategyChoice:
    """Стратегия вместе с её аналитической ценностью (если есть)"""

    name: str
    strategy: EmissionStrategy
    analytic_value: Optional[float]
    parameters: Dict[str, float]


def build_strategy(
    name: str,
    params: ModelParams,
    x0: float,
    grid_n: int,
    options: Optional[Dict[str, Any]] = None,
    surface: Optional[ValueSurface] = None,
) -> StrategyChoice:
    """
    Создаёт стратегию по имени и подставляет параметры по умолчанию

    constant: c = c̄; linear: m = c̄²/(2x0); barrier: b = b*; multi_threshold:
    поверхность решается на сетке grid_n, если не передана готовая.
    """
    options = dict(options or {})

    if name == "multi_threshold":
        if surface is None:
            surface = solve_surface(params, build_grid(params.c_bar, grid_n))
        strategy = StrategyFactory.create(name, surface=surface)
        return StrategyChoice(
            name, strategy, surface_eval(surface, x0, surface.top_level)[0], {"n": grid_n}
        )

    if name == "constant":
        c = float(options.get("c", params.c_bar))
        return StrategyChoice(
            name, StrategyFactory.create(name, c=c), constant_rate_value(params, c, x0), {"c": c}
        )

    if name == "linear":
        slope = options.get("slope")
        if slope is None:
            slope, _ = linear_schedule(params.c_bar, x0)
        strategy = StrategyFactory.create(name, c_bar=params.c_bar, slope=float(slope))
        return StrategyChoice(name, strategy, None, {"slope": float(slope)})

    if name == "barrier":
        b = options.get("b")
        if b is None:
            b = optimal_barrier(params).b
        strategy = StrategyFactory.create(name, b=float(b), c_bar=params.c_bar)
        return StrategyChoice(name, strategy, barrier_value(params, float(b), x0), {"b": float(b)})

    strategy = StrategyFactory.create(name)
    return StrategyChoice(name, strategy, no_emission_value(params, x0), {})


@dataclass
class SimulationReport:
    """Оценки ценности и времени исчерпания для одной стратегии"""

    choice: StrategyChoice
    value: McEstimate
    depletion: McEstimate
    trace: Optional[pd.DataFrame] = None

    def as_record(self) -> Dict[str, Any]:
        """Запись для estimate.json"""
        return {
            "strategy": self.choice.name,
            "strategy_parameters": self.choice.parameters,
            "analytic_value": self.choice.analytic_value,
            "value": _estimate_record(self.value),
            "depletion_time": _estimate_record(self.depletion),
        }


def _estimate_record(estimate: McEstimate) -> Dict[str, Any]:
    return {
        "mean": estimate.mean,
        "half_width_95": estimate.half_width_95,
        "ci_95": [estimate.lower, estimate.upper],
        "n_paths": estimate.n_paths,
        "degenerate": estimate.degenerate,
        "censored_fraction": estimate.censored_fraction,
    }


class SimulateStrategyUseCase:
    """
    Use Case: Симуляция стратегии

    Один прогон траекторий даёт и ценность, и время исчерпания.
    """

    def __init__(self, params: ModelParams, cfg: McConfig, workers: int = 1):
        self.params = params
        self.cfg = cfg
        self.workers = workers

    def execute(
        self, choice: StrategyChoice, x0: float, trace_index: Optional[int] = None
    ) -> SimulationReport:
        """
        Оценивает стратегию из бюджета x0

        Args:
            choice: Стратегия из build_strategy
            x0: Начальный бюджет
            trace_index: Номер траектории для path_trace.csv (None - без трассы)
        """
        result = run_simulation(self.params, choice.strategy, x0, self.cfg, self.workers)
        value = summarize_payoffs(result)
        depletion = summarize_depletion(result)
        logger.info(
            "%s: ценность %.6g ± %.3g, E[τ] %.4g ± %.3g",
            choice.name,
            value.mean,
            value.half_width_95,
            depletion.mean,
            depletion.half_width_95,
        )

        trace = None
        if trace_index is not None:
            path = trace_path(self.params, choice.strategy, x0, self.cfg, trace_index)
            trace = pd.DataFrame({"t": path.t, "X_t": path.x, "C_t": path.c})

        return SimulationReport(choice=choice, value=value, depletion=depletion, trace=trace)
