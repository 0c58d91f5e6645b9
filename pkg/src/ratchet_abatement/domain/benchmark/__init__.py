"""
Unconstrained benchmark - Барьерная стратегия без ratcheting
"""

from .barrier import barrier_curve, barrier_solution, barrier_value, optimal_barrier

__all__ = ["barrier_value", "barrier_curve", "barrier_solution", "optimal_barrier"]
