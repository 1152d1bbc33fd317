"""
Tests for multipliers, the Euler scheme, the limit ODE and the Gronwall check
"""

import numpy as np
import pytest

from src.sde import sde_sim
from src.sde.multipliers import (
    constant_multiplier,
    make_multiplier,
    rational_multiplier,
    sine_multiplier,
)
from src.sde.sde_sim import (
    SdeConfig,
    deterministic_solution,
    deviation_bound,
    euler_path,
    gronwall_check,
    resolution_grid,
    simulate_sde,
)
from src.stable.random_streams import make_stream
from src.stable.stable_core import SamplePath, StableParams, TimeGrid, simulate_levy_path
from src.utils.errors import DomainError, GridMismatchError, SmoothnessError


def _zero_noise(grid):
    return SamplePath(grid, np.zeros(grid.n_steps + 1), label='Z')


def test_sine_derivatives_match_finite_differences():
    theta = sine_multiplier(1.5, 2.0)
    h = 1e-4
    for t in (0.3, 1.1):
        numeric = (theta(t + h) - theta(t - h)) / (2 * h)
        assert float(theta.deriv(t, 1)) == pytest.approx(numeric, abs=1e-6)
        numeric2 = (theta.deriv(t + h, 2) - theta.deriv(t - h, 2)) / (2 * h)
        assert float(theta.deriv(t, 3)) == pytest.approx(float(numeric2), abs=1e-5)


def test_rational_derivatives_match_finite_differences():
    theta = rational_multiplier(2.0)
    h = 1e-4
    for order in range(1, 5):
        for t in (0.0, 0.7, 1.9):
            previous = theta.deriv(t + h, order - 1) - theta.deriv(t - h, order - 1)
            assert float(theta.deriv(t, order)) == pytest.approx(float(previous) / (2 * h), abs=1e-5)
    with pytest.raises(SmoothnessError):
        theta.deriv(1.0, 5)


def test_integrals_are_closed_form():
    t = np.array([0.0, 0.5, 2.0])
    assert np.allclose(sine_multiplier().integral(t), 1.0 - np.cos(t))
    assert np.allclose(rational_multiplier().integral(t), np.arctan(t))
    assert np.allclose(constant_multiplier(0.5).integral(t), 0.5 * t)


def test_make_multiplier_and_bounds():
    assert make_multiplier('sine', 2.0, 1.0).bound == 2.0
    with pytest.raises(DomainError):
        make_multiplier('cubic')
    max_abs, ok = sine_multiplier().check_bound(2.0)
    assert ok and max_abs == pytest.approx(1.0, abs=1e-6)
    assert not sine_multiplier(2.0).check_bound(2.0, bound=1.0)[1]


def test_euler_noise_free_constant_multiplier():
    grid = TimeGrid(1.0, 1000)
    path = euler_path(constant_multiplier(0.5), 2.0, 0.0, _zero_noise(grid))
    expected = 2.0 * (1.0 + 0.5 * grid.step) ** np.arange(grid.n_steps + 1)
    assert np.allclose(path.values, expected, rtol=1e-12)


def test_euler_closed_form_matches_recursion():
    grid = TimeGrid(2.0, 2000)
    noise = simulate_levy_path(1.5, 0.0, grid, make_stream(1, 0))
    theta = sine_multiplier()
    path = euler_path(theta, 1.0, 0.1, noise)

    expected = np.empty(grid.n_steps + 1)
    expected[0] = 1.0
    for i in range(grid.n_steps):
        expected[i + 1] = expected[i] + theta(grid.times[i]) * expected[i] * grid.step + 0.1 * noise.increments[i]
    assert np.allclose(path.values, expected, rtol=1e-9, atol=1e-9)


def test_euler_with_zero_growth_factor_uses_recursion():
    grid = TimeGrid(1.0, 10)
    theta = constant_multiplier(-10.0)
    noise = SamplePath(grid, np.linspace(0.0, 1.0, 11))
    path = euler_path(theta, 1.0, 1.0, noise)
    assert path.values[1] == pytest.approx(0.1)
    assert path.values[2] == pytest.approx(0.1)

def test_euler_error_is_first_order_in_the_step():
    theta = sine_multiplier()
    errors = []
    for n_steps in (1000, 2000, 4000):
        grid = TimeGrid(2.0, n_steps)
        X, _ = simulate_sde(SdeConfig(theta, 1.0, 0.0, StableParams(1.5), grid), make_stream(2, 0))
        errors.append(np.max(np.abs(X.values - deterministic_solution(theta, 1.0, grid).values)))
    assert 1.7 <= errors[0] / errors[1] <= 2.3
    assert 1.7 <= errors[1] / errors[2] <= 2.3


def test_zero_multiplier_path_is_linear_in_the_noise():
    grid = TimeGrid(2.0, 1000)
    noise = simulate_levy_path(1.5, 0.0, grid, make_stream(4, 0))
    flat = constant_multiplier(0.0)
    x = deterministic_solution(flat, 0.7, grid)
    small = euler_path(flat, 0.7, 0.05, noise)
    large = euler_path(flat, 0.7, 0.1, noise)
    assert np.array_equal(x.values, np.full(grid.n_steps + 1, 0.7))
    assert np.array_equal(small.values, 0.7 + 0.05 * noise.values)
    assert np.allclose(large.values - x.values, 2.0 * (small.values - x.values), rtol=1e-12, atol=1e-12)

    # from the origin the map eps -> X is linear to the last bit
    assert np.array_equal(euler_path(flat, 0.0, 0.1, noise).values,
                          2.0 * euler_path(flat, 0.0, 0.05, noise).values)


def test_noise_response_does_not_depend_on_eps():
    grid = TimeGrid(2.0, 2000)
    noise = simulate_levy_path(1.5, 0.0, grid, make_stream(6, 0))
    theta = sine_multiplier()
    drift_only = euler_path(theta, 1.0, 0.0, noise).values
    one = euler_path(theta, 1.0, 0.1, noise).values - drift_only
    two = euler_path(theta, 1.0, 0.2, noise).values - drift_only
    assert np.allclose(two, 2.0 * one, rtol=1e-12, atol=1e-12)


def test_deterministic_solution_matches_closed_form():
    grid = TimeGrid(2.0, 2000)
    x = deterministic_solution(sine_multiplier(), 1.0, grid)
    assert np.allclose(x.values, np.exp(1.0 - np.cos(grid.times)), rtol=1e-8)
    c = deterministic_solution(constant_multiplier(0.5), 3.0, grid)
    assert np.allclose(c.values, 3.0 * np.exp(0.5 * grid.times), rtol=1e-8)


def test_gronwall_bound_holds_on_a_noisy_path():
    grid = TimeGrid(2.0, 20000)
    cfg = SdeConfig(sine_multiplier(), 1.0, 0.1, StableParams(1.5), grid, bound=1.0)
    for rep in range(5):
        X, Z = simulate_sde(cfg, make_stream(21, rep))
        report = gronwall_check(X, deterministic_solution(cfg.multiplier, 1.0, grid), Z, 1.0, 0.1)
        assert report.holds
        assert report.worst_excess <= 0.0
        assert list(report.to_frame().columns) == ['t', 'deviation', 'bound']


def test_gronwall_rejects_mismatched_grids():
    grid = TimeGrid(1.0, 100)
    X = _zero_noise(grid)
    with pytest.raises(GridMismatchError):
        gronwall_check(X, _zero_noise(TimeGrid(1.0, 50)), X, 1.0, 0.1)


def test_resolution_rule_puts_enough_points_in_every_window():
    grid = resolution_grid(2.0, 0.05, 2.0, points=200)
    assert grid.window_indices(1.0 - 0.05, 1.0 + 0.05).size >= 200
    with pytest.raises(DomainError):
        resolution_grid(2.0, 0.0, 2.0)


def test_sde_config_validation(mocker):
    grid = TimeGrid(1.0, 100)
    with pytest.raises(DomainError):
        SdeConfig(sine_multiplier(), 1.0, 0.1, StableParams(1.5, sigma=2.0), grid)
    with pytest.raises(DomainError):
        SdeConfig(sine_multiplier(), 1.0, 0.1, StableParams(1.0), grid)
    with pytest.raises(DomainError):
        SdeConfig(sine_multiplier(), 1.0, -0.1, StableParams(1.5), grid)

    warn = mocker.patch.object(sde_sim.logger, 'config_warning')
    cfg = SdeConfig(sine_multiplier(2.0), 1.0, 0.1, StableParams(1.5), grid, bound=1.0)
    warn.assert_called_once()
    assert cfg.alpha == 1.5 and cfg.beta == 0.0


def test_deviation_bound_shape():
    assert deviation_bound(1.0, 2.0, 0.1, 1.5) == pytest.approx(np.exp(2.0) * 0.1 * 2.0 ** (2.0 / 3.0))
    assert deviation_bound(1.0, 2.0, 0.05, 1.5) == pytest.approx(0.5 * deviation_bound(1.0, 2.0, 0.1, 1.5))
