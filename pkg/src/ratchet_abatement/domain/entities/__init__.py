"""
Domain entities - Доменные сущности
"""

from .barrier import BarrierSolution
from .convergence import ConvergenceReport
from .model_params import ModelParams, Roots
from .monte_carlo import McConfig, McEstimate
from .rate_grid import RateGrid
from .value_surface import HjbReport, RegionClass, ValueSurface
from .zero_threshold import (
    AllRatesZeroThreshold,
    NoZeroInterval,
    ZeroThresholdRegion,
    ZeroUpTo,
)

__all__ = [
    "ModelParams",
    "Roots",
    "RateGrid",
    "ValueSurface",
    "HjbReport",
    "RegionClass",
    "BarrierSolution",
    "McConfig",
    "McEstimate",
    "ConvergenceReport",
    "AllRatesZeroThreshold",
    "ZeroUpTo",
    "NoZeroInterval",
    "ZeroThresholdRegion",
]
