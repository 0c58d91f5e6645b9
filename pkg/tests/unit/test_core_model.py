"""
Тесты базовой модели: корни, замкнутые формулы, область нулевого порога
"""

import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ratchet_abatement.domain.entities.model_params import ModelParams
from ratchet_abatement.domain.entities.zero_threshold import (
    AllRatesZeroThreshold,
    NoZeroInterval,
    ZeroUpTo,
)
from ratchet_abatement.domain.errors import (
    DegenerateVolatilityError,
    InvalidParameterError,
)
from ratchet_abatement.domain.model.core_model import (
    characteristic_roots,
    closed_form_profile,
    constant_rate_derivatives,
    constant_rate_value,
    deterministic_limit_value,
    generator_apply,
    no_emission_value,
    zero_threshold_bound,
)

params_strategy = st.builds(
    ModelParams,
    mu=st.floats(-5.0, 5.0),
    sigma=st.floats(0.05, 5.0),
    q=st.floats(0.01, 1.0),
    lam=st.floats(0.0, 5.0),
    c_bar=st.floats(0.1, 10.0),
)


def test_roots_reference_values():
    """μ=3, σ=2, q=0.1, c=4"""
    params = ModelParams(mu=3.0, sigma=2.0, q=0.1, lam=4.0, c_bar=4.0)
    roots = characteristic_roots(params, 4.0)
    assert roots.theta1 == pytest.approx(-0.0854102, abs=1e-7)
    assert roots.theta2 == pytest.approx(0.5854102, abs=1e-7)


def test_roots_at_drift_rate():
    params = ModelParams(mu=1.0, sigma=0.5, q=0.2, lam=1.0, c_bar=2.0)
    roots = characteristic_roots(params, 1.0)
    expected = math.sqrt(2 * 0.2) / 0.5
    assert roots.theta1 == pytest.approx(-expected, rel=1e-12)
    assert roots.theta2 == pytest.approx(expected, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(params=params_strategy, c=st.floats(0.0, 50.0))
def test_roots_solve_quadratic(params, c):
    """Оба корня обращают многочлен в ноль, произведение равно -2q/σ²"""
    roots = characteristic_roots(params, c)
    half_var = 0.5 * params.sigma**2
    for theta in (roots.theta1, roots.theta2):
        terms = (half_var * theta**2, (params.mu - c) * theta, params.q)
        value = terms[0] + terms[1] - terms[2]
        assert abs(value) <= 1e-10 * max(abs(t) for t in terms)
    assert roots.theta1 * roots.theta2 == pytest.approx(-2 * params.q / params.sigma**2, rel=1e-10)


def test_roots_stable_far_from_drift():
    """|c - μ| >> σ: малый корень без потери точности"""
    params = ModelParams(mu=0.0, sigma=1e-3, q=0.1, lam=1.0, c_bar=1e3)
    roots = characteristic_roots(params, 1e3)
    assert roots.theta1 == pytest.approx(-1e-4, rel=1e-9)


def test_roots_reject_degenerate():
    params = ModelParams(mu=1.0, sigma=0.0, q=0.1, lam=1.0, c_bar=2.0)
    with pytest.raises(DegenerateVolatilityError):
        characteristic_roots(params, 1.0)


def test_constant_rate_value_reference(large_reward_params):
    assert constant_rate_value(large_reward_params, 4.0, 0.0) == 0.0
    assert constant_rate_value(large_reward_params, 4.0, 5.0) == pytest.approx(27.80, abs=0.01)
    assert constant_rate_value(large_reward_params, 4.0, 1e4) == pytest.approx(80.0, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(params=params_strategy, c=st.floats(0.0, 10.0), x=st.floats(0.0, 50.0))
def test_constant_rate_value_shape(params, c, x):
    """Возрастает, вогнута и ограничена (c+Λ)/q"""
    value, slope, curvature = constant_rate_derivatives(params, c, x)
    cap = (c + params.lam) / params.q
    assert 0.0 <= value <= cap * (1 + 1e-12)
    assert slope >= 0.0
    assert curvature <= 0.0
    if params.lam + c > 0 and slope > 1e-6:
        assert constant_rate_value(params, c, x + 1e-4) > value


@settings(max_examples=100, deadline=None)
@given(params=params_strategy, c=st.floats(0.0, 10.0), x=st.floats(0.0, 30.0))
def test_closed_form_solves_generator(params, c, x):
    value, slope, curvature = constant_rate_derivatives(params, c, x)
    residual = generator_apply(params, c, value, slope, curvature)
    scale = max(
        1.0,
        c + params.lam,
        abs(0.5 * params.sigma**2 * curvature),
        abs((params.mu - c) * slope),
    )
    assert abs(residual) <= 1e-9 * scale


@settings(max_examples=100, deadline=None)
@given(params=params_strategy, c=st.floats(0.0, 10.0), u=st.floats(0.05, 1.0))
def test_derivatives_match_central_differences(params, c, u):
    """Аналитические W', W'' против центральных разностей, |θ₁x| <= 3"""
    assume(c + params.lam > 0.01)
    scale = abs(characteristic_roots(params, c).theta1)
    x, h = 3.0 * u / scale, 1e-3 / scale

    value, slope, curvature = constant_rate_derivatives(params, c, x)
    upper = constant_rate_value(params, c, x + h)
    lower = constant_rate_value(params, c, x - h)

    assert (upper - lower) / (2 * h) == pytest.approx(slope, rel=1e-6)
    assert (upper - 2 * value + lower) / h**2 == pytest.approx(curvature, rel=1e-6)


def test_generator_constant_solution(base_params):
    cap = (1.0 + 1.5) / 0.1
    assert generator_apply(base_params, 1.0, cap, 0.0, 0.0) == pytest.approx(0.0, abs=1e-12)
    assert generator_apply(base_params, 1.0, 0.0, 0.0, 0.0) == pytest.approx(2.5)


def test_no_emission_value(large_reward_params):
    assert no_emission_value(large_reward_params, 0.0) == 0.0
    assert no_emission_value(large_reward_params, 5.0) == pytest.approx(39.98, abs=0.01)
    assert no_emission_value(large_reward_params, 3.0) == constant_rate_value(large_reward_params, 0.0, 3.0)

    no_reward = ModelParams(mu=1.0, sigma=1.0, q=0.1, lam=0.0, c_bar=2.0)
    assert no_emission_value(no_reward, 7.0) == 0.0


def test_closed_form_profile_unit_coefficient(base_params):
    """a = 1 совпадает с W^c"""
    values, slopes = closed_form_profile(base_params, 1.2, 1.0, [0.0, 2.0, 8.0])
    for x, value, slope in zip([0.0, 2.0, 8.0], values, slopes):
        expected = constant_rate_derivatives(base_params, 1.2, x)
        assert value == pytest.approx(expected[0], rel=1e-12, abs=1e-14)
        assert slope == pytest.approx(expected[1], rel=1e-12)


def test_zero_threshold_regions():
    zero_reward = ModelParams(mu=1.0, sigma=1.0, q=0.1, lam=0.0, c_bar=2.0)
    region = zero_threshold_bound(zero_reward)
    assert isinstance(region, ZeroUpTo)
    assert region.c_crit == pytest.approx(0.6, rel=1e-12)
    assert region.covers(0.6) and not region.covers(0.61)

    negative_drift = ModelParams(mu=-1.0, sigma=1.0, q=0.1, lam=0.5, c_bar=2.0)
    assert isinstance(zero_threshold_bound(negative_drift), AllRatesZeroThreshold)

    large_reward = ModelParams(mu=3.0, sigma=2.0, q=0.1, lam=4.0, c_bar=4.0)
    region = zero_threshold_bound(large_reward)
    assert isinstance(region, NoZeroInterval)
    assert region.describe() == "NoZeroInterval"
    assert not region.covers(0.01)


def test_deterministic_limit():
    params = ModelParams(mu=1.0, sigma=0.0, q=0.1, lam=1.5, c_bar=2.0)
    assert deterministic_limit_value(params, 5.0, 2.0) == pytest.approx(35 - 10 * math.exp(-0.5))
    assert deterministic_limit_value(params, 0.0, 2.0) == pytest.approx((1.0 + 1.5) / 0.1)
    assert deterministic_limit_value(params, 3.0, 0.5) == pytest.approx(20.0)


def test_deterministic_limit_rejects_diffusion_and_negative_drift(base_params):
    with pytest.raises(DegenerateVolatilityError):
        deterministic_limit_value(base_params, 1.0, 1.0)

    falling = ModelParams(mu=-0.5, sigma=0.0, q=0.1, lam=1.5, c_bar=2.0)
    with pytest.raises(InvalidParameterError):
        deterministic_limit_value(falling, 1.0, 1.0)


def test_negative_budget_rejected(base_params):
    with pytest.raises(InvalidParameterError):
        constant_rate_value(base_params, 1.0, -0.1)
