"""
MC engine - Симуляция управляемого бюджета
"""

from .monte_carlo import (
    PathTrace,
    SimulationResult,
    depletion_stats,
    estimate_value,
    linear_schedule,
    run_simulation,
    simulate_path,
    summarize_depletion,
    summarize_payoffs,
    trace_path,
)

__all__ = [
    "PathTrace",
    "SimulationResult",
    "simulate_path",
    "trace_path",
    "run_simulation",
    "estimate_value",
    "depletion_stats",
    "summarize_payoffs",
    "summarize_depletion",
    "linear_schedule",
]
