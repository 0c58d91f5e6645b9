"""
Интеграционные тесты сценариев: решение, симуляция, сравнение, сходимость
"""

import math

import numpy as np
import pytest

from ratchet_abatement.application.use_cases import (
    CompareStrategiesUseCase,
    ConvergenceStudyUseCase,
    SimulateStrategyUseCase,
    SolveSurfaceUseCase,
    build_strategy,
    compare_strategies,
    convergence_frame,
)
from ratchet_abatement.domain.entities.model_params import ModelParams
from ratchet_abatement.domain.entities.monte_carlo import McConfig
from ratchet_abatement.domain.errors import InvalidParameterError
from ratchet_abatement.domain.model.core_model import no_emission_value

FAST_MC = McConfig(dt=0.01, n_paths=200, seed=4, batch_size=100, tail_tol=1e-3)


def test_solve_report(base_params):
    report = SolveSurfaceUseCase(base_params).execute(grid_n=20, x_max=10.0, x_points=41)
    assert report.verified, report.violations

    assert list(report.thresholds.columns) == [
        "level_index",
        "c_i",
        "z_star",
        "a_star",
        "theta1",
        "foc_residual",
        "foc_relative",
    ]
    assert len(report.thresholds) == 21
    assert math.isnan(report.thresholds["foc_residual"].iloc[0])

    assert len(report.hjb) == 21 * 41
    assert set(report.hjb["classification"]) <= {"EmitRegion", "ReduceRegion", "Boundary"}
    assert not report.hjb["violation"].any()

    curve = report.value_curve
    assert np.all(curve["barrier_value"] >= curve["value"] - 1e-9)

    assert report.summary["zero_threshold_region"] == "NoZeroInterval"
    assert report.summary["all_thresholds_positive"]
    assert report.summary["value_range"][1] <= base_params.value_cap


def test_solve_report_zero_region(zero_region_params):
    report = SolveSurfaceUseCase(zero_region_params).execute(grid_n=10, x_points=21)
    assert report.summary["zero_threshold_region"].startswith("ZeroUpTo(0.6")
    assert report.summary["zero_threshold_levels"] == 3
    assert report.summary["max_zero_threshold_rate"] == pytest.approx(0.6)


def test_build_strategy_defaults(base_params):
    linear = build_strategy("linear", base_params, 5.0, 10)
    assert linear.parameters == pytest.approx({"slope": 0.4})
    assert linear.analytic_value is None

    constant = build_strategy("constant", base_params, 5.0, 10, {"c": 1.0})
    assert constant.parameters == {"c": 1.0}

    barrier = build_strategy("barrier", base_params, 5.0, 10)
    assert barrier.parameters["b"] == pytest.approx(2.997, abs=0.005)


def test_simulate_with_trace(base_params):
    choice = build_strategy("constant", base_params, 2.0, 10)
    report = SimulateStrategyUseCase(base_params, FAST_MC).execute(choice, 2.0, trace_index=3)
    assert list(report.trace.columns) == ["t", "X_t", "C_t"]
    assert report.trace["X_t"].iloc[0] == 2.0
    record = report.as_record()
    assert record["strategy"] == "constant"
    assert record["value"]["n_paths"] == 200
    low, high = record["value"]["ci_95"]
    assert low <= record["value"]["mean"] <= high
    assert high - low == pytest.approx(2 * record["value"]["half_width_95"])


def test_compare_table(base_params):
    report = CompareStrategiesUseCase(FAST_MC, grid_n=10).execute(base_params, 2.0)
    table = report.table.set_index("strategy")
    assert list(table.index) == ["multi_threshold", "barrier", "linear", "constant", "no_emission"]
    assert table.loc["no_emission", "analytic_value"] == no_emission_value(base_params, 2.0)
    assert math.isnan(table.loc["barrier", "mc_value"])
    assert table.loc["barrier", "relative_efficiency"] == pytest.approx(1.0)
    assert table.loc["multi_threshold", "analytic_value"] <= table.loc["barrier", "analytic_value"]
    assert "ordering_ok" in report.diagnostics
    assert report.diagnostics["ratcheting_gap"] >= 0
    assert len(report.threshold_curves) == 11


def test_compare_strategies_function(base_params):
    """Таблица по умолчанию совпадает с таблицей сценария"""
    table = compare_strategies(base_params, 2.0, FAST_MC, grid_n=10)
    expected = CompareStrategiesUseCase(FAST_MC, grid_n=10).execute(base_params, 2.0).table
    assert table.equals(expected)


def test_compare_sweep(base_params):
    use_case = CompareStrategiesUseCase(
        FAST_MC, grid_n=5, strategies=["multi_threshold", "no_emission"]
    )
    report = use_case.execute_sweep(base_params, 2.0, "lambda", [1.0, 1.5])
    assert list(report.table["sweep_value"]) == [1.0, 1.0, 1.5, 1.5]
    assert set(report.threshold_curves["sweep_parameter"]) == {"lambda"}
    assert set(report.diagnostics) == {"1.0", "1.5"}

    with pytest.raises(InvalidParameterError):
        use_case.execute_sweep(base_params, 2.0, "x0", [1.0])


def test_compare_rejects_empty_strategy_list():
    with pytest.raises(InvalidParameterError):
        CompareStrategiesUseCase(FAST_MC, strategies=[])


def test_convergence_study(base_params):
    xs = np.linspace(0.0, 10.0, 51)
    report = ConvergenceStudyUseCase(base_params).execute([5, 10, 20, 40], xs)
    assert report.mesh_sizes == (5, 10, 20, 40)
    assert len(report.sup_diffs) == 3
    assert all(d >= 0 for d in report.sup_diffs)
    assert report.monotone_ok
    assert len(report.rates) == 2

    frame = convergence_frame(report)
    assert list(frame.columns) == ["n_coarse", "n_fine", "sup_diff", "min_increment", "rate"]
    assert math.isnan(frame["rate"].iloc[0])


def test_convergence_single_mesh(base_params):
    report = ConvergenceStudyUseCase(base_params).execute([10], [0.0, 1.0])
    assert report.sup_diffs == ()
    assert report.monotone_ok
    assert convergence_frame(report).empty


def test_convergence_rejects_non_nested(base_params):
    with pytest.raises(InvalidParameterError):
        ConvergenceStudyUseCase(base_params).execute([10, 15], [1.0])
    with pytest.raises(InvalidParameterError):
        ConvergenceStudyUseCase(base_params).execute([20, 10], [1.0])


def test_convergence_nesting_with_inexact_c_bar():
    """c̄ = 0.3: узлы S^10 входят в S^30 побитово"""
    params = ModelParams(mu=0.1, sigma=1.0, q=0.1, lam=0.5, c_bar=0.3)
    report = ConvergenceStudyUseCase(params).execute([10, 30], [0.0, 1.0, 2.0])
    assert report.mesh_sizes == (10, 30)
    with pytest.raises(InvalidParameterError):
        ConvergenceStudyUseCase(params).execute([10, 10], [1.0])
