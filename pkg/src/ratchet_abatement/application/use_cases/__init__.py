"""
Use Cases - Сценарии использования
"""

from .compare_strategies import CompareStrategiesUseCase, ComparisonReport, compare_strategies
from .convergence_study import ConvergenceStudyUseCase, convergence_frame, convergence_study
from .record_run import RecordRunUseCase
from .simulate_strategy import (
    SimulateStrategyUseCase,
    SimulationReport,
    StrategyChoice,
    build_strategy,
)
from .solve_surface import SolveReport, SolveSurfaceUseCase, evaluation_grid

__all__ = [
    "SolveSurfaceUseCase",
    "SolveReport",
    "evaluation_grid",
    "SimulateStrategyUseCase",
    "SimulationReport",
    "StrategyChoice",
    "build_strategy",
    "CompareStrategiesUseCase",
    "ComparisonReport",
    "compare_strategies",
    "ConvergenceStudyUseCase",
    "convergence_study",
    "convergence_frame",
    "RecordRunUseCase",
]
