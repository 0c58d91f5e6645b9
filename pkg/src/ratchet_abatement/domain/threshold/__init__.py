"""
Threshold solver - Рекурсивное построение порогов и проверки оптимальности
"""

from .solver import (
    build_grid,
    foc_residual,
    gi_evaluate,
    minimize_gi,
    solve_surface,
    surface_eval,
    surface_value_at_rate,
)
from .verification import (
    LipschitzReport,
    ObstacleReport,
    coefficient_band_ok,
    coefficient_band_violations,
    hjb_verify,
    level_monotonicity_ok,
    lipschitz_estimate,
    obstacle_check,
    threshold_inflection,
    threshold_monotonicity_violations,
    value_bounds,
)

__all__ = [
    "build_grid",
    "gi_evaluate",
    "minimize_gi",
    "solve_surface",
    "surface_eval",
    "surface_value_at_rate",
    "foc_residual",
    "hjb_verify",
    "threshold_inflection",
    "coefficient_band_ok",
    "coefficient_band_violations",
    "obstacle_check",
    "threshold_monotonicity_violations",
    "lipschitz_estimate",
    "level_monotonicity_ok",
    "value_bounds",
    "ObstacleReport",
    "LipschitzReport",
]
