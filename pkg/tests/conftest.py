"""
Общие фикстуры тестов
"""

from pathlib import Path
from typing import Any, Dict

import pytest

from ratchet_abatement.domain.entities.model_params import ModelParams
from ratchet_abatement.domain.entities.value_surface import ValueSurface
from ratchet_abatement.domain.threshold.solver import build_grid, solve_surface


@pytest.fixture
def large_reward_params() -> ModelParams:
    """μ=3, σ=2, q=0.1, Λ=4, c̄=4: порог положителен для всех c > 0"""
    return ModelParams(mu=3.0, sigma=2.0, q=0.1, lam=4.0, c_bar=4.0)


@pytest.fixture
def base_params() -> ModelParams:
    """μ=1, σ=1, q=0.1, Λ=1.5, c̄=2"""
    return ModelParams(mu=1.0, sigma=1.0, q=0.1, lam=1.5, c_bar=2.0)


@pytest.fixture
def zero_region_params() -> ModelParams:
    """Λ=0, μ=1, σ=1, q=0.1: нулевой порог при c <= 0.6"""
    return ModelParams(mu=1.0, sigma=1.0, q=0.1, lam=0.0, c_bar=2.0)


@pytest.fixture
def driftless_params() -> ModelParams:
    """μ=0, σ=1, q=0.1, Λ=1.5, c̄=2"""
    return ModelParams(mu=0.0, sigma=1.0, q=0.1, lam=1.5, c_bar=2.0)


@pytest.fixture
def base_surface(base_params: ModelParams) -> ValueSurface:
    return solve_surface(base_params, build_grid(base_params.c_bar, 50))


@pytest.fixture
def large_reward_surface(large_reward_params: ModelParams) -> ValueSurface:
    return solve_surface(large_reward_params, build_grid(large_reward_params.c_bar, 40))


@pytest.fixture
def run_document() -> Dict[str, Any]:
    """Небольшая конфигурация запуска для CLI и config-тестов"""
    return {
        "model": {"mu": 1.0, "sigma": 1.0, "q": 0.1, "lambda": 1.5, "c_bar": 2.0},
        "grid_n": 20,
        "mc": {"dt": 0.01, "n_paths": 64, "seed": 7, "batch_size": 32},
        "x0": 2.0,
        "x_max": 6.0,
        "x_points": 25,
        "converge": {"n_list": [5, 10, 20]},
    }


@pytest.fixture
def isolated_env(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Пустой рабочий каталог без RATCHET_* переменных окружения"""
    for name in ("RATCHET_LOG_LEVEL", "RATCHET_DATABASE_URL", "RATCHET_WORKERS", "RATCHET_OUTPUT_DIR"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
    return tmp_path
