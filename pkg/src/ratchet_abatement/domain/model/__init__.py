"""
Core model - Корни, генератор и замкнутые формулы
"""

from .core_model import (
    characteristic_roots,
    closed_form_profile,
    constant_rate_derivatives,
    constant_rate_value,
    deterministic_limit_value,
    generator_apply,
    no_emission_value,
    zero_threshold_bound,
)

__all__ = [
    "characteristic_roots",
    "closed_form_profile",
    "constant_rate_derivatives",
    "constant_rate_value",
    "deterministic_limit_value",
    "generator_apply",
    "no_emission_value",
    "zero_threshold_bound",
]
