"""
Tests for stable sampling, Levy paths and random streams
"""

import numpy as np
import pytest

from src.analysis.asymptotics import ks_test, ks_critical_value
from src.stable.random_streams import StreamFactory, make_stream
from src.stable.stable_core import (
    SamplePath,
    StableParams,
    TimeGrid,
    empirical_cf,
    moment_bound_profile,
    running_sup_abs,
    sample_stable,
    sample_standard_stable,
    simulate_levy_path,
    stable_cf,
)
from src.utils.errors import DomainError, EmptyInputError, GridMismatchError


@pytest.mark.parametrize("alpha", [1.2, 1.5, 1.8, 2.0])
@pytest.mark.parametrize("beta", [-0.5, 0.0, 0.5])
def test_empirical_cf_matches_closed_form(alpha, beta):
    rng = make_stream(2024, 0)
    draws = sample_standard_stable(alpha, beta, rng, size=100_000)
    u = np.array([-2.0, -1.0, -0.5, 0.5, 1.0, 2.0])
    gap = np.abs(empirical_cf(draws, u) - stable_cf(StableParams(alpha, beta), u))
    assert np.max(gap) < 0.02


def test_gaussian_edge_is_normal_with_variance_two():
    draws = sample_standard_stable(2.0, 0.0, make_stream(5, 0), size=100_000)
    assert abs(np.var(draws) - 2.0) < 0.05

    normal = make_stream(5, 1).normal(0.0, np.sqrt(2.0), size=100_000)
    report = ks_test(draws, normal, ks_critical_value(draws.size, normal.size))
    assert report.passed


def test_scalar_and_array_draws():
    rng = make_stream(1, 0)
    assert isinstance(sample_standard_stable(1.5, 0.0, rng), float)
    assert sample_standard_stable(1.5, 0.0, rng, size=(3, 4)).shape == (3, 4)


def test_alpha_one_branch_matches_cf():
    params = StableParams(1.0, 0.5, sigma=1.0)
    draws = sample_stable(params, make_stream(3, 0), size=100_000)
    u = np.array([0.5, 1.0, 2.0])
    assert np.max(np.abs(empirical_cf(draws, u) - stable_cf(params, u))) < 0.02


def test_scaled_and_shifted_law():
    params = StableParams(1.5, 0.3, sigma=2.0, mu=1.0)
    draws = sample_stable(params, make_stream(4, 0), size=100_000)
    u = np.array([-1.0, 0.25, 0.5])
    assert np.max(np.abs(empirical_cf(draws, u) - stable_cf(params, u))) < 0.02


def test_cf_is_one_at_origin_and_scalar_in_scalar_out():
    assert stable_cf(StableParams(1.0, 0.7), 0.0) == pytest.approx(1.0)
    assert isinstance(stable_cf(StableParams(1.5), 1.0), complex)
    assert stable_cf(StableParams(1.5), 1.0) == pytest.approx(np.exp(-1.0))


def test_parameter_validation():
    with pytest.raises(DomainError):
        StableParams(2.5)
    with pytest.raises(DomainError):
        StableParams(1.5, beta=1.5)
    with pytest.raises(DomainError):
        StableParams(1.5, sigma=0.0)
    with pytest.raises(DomainError):
        StableParams(0.8).require_model_regime()
    assert StableParams(1.5).is_strict
    assert not StableParams(1.0, beta=0.5).is_strict


def test_time_grid_and_windows():
    grid = TimeGrid(2.0, 200)
    assert grid.step == pytest.approx(0.01)
    assert grid.times[0] == 0.0 and grid.times[-1] == 2.0
    indices = grid.window_indices(0.495, 0.605)
    assert indices[0] == 50 and indices[-1] == 60
    # right end open: a node sitting exactly on hi is left out
    assert TimeGrid(2.0, 256).window_indices(0.5, 0.625).tolist() == list(range(64, 80))
    assert grid.window_indices(1.985, 3.0).tolist() == [199]

    with pytest.raises(DomainError):
        TimeGrid(0.0, 10)
    with pytest.raises(DomainError):
        TimeGrid(1.0, 1)


def test_sample_path_checks():
    grid = TimeGrid(1.0, 10)
    with pytest.raises(DomainError):
        SamplePath(grid, np.zeros(5))

    path = SamplePath(grid, np.linspace(0.0, 1.0, 11), label='a')
    assert path.value_at(0.55) == pytest.approx(0.55)
    assert np.allclose(path.scaled(3.0).values, 3.0 * path.values)
    with pytest.raises(GridMismatchError):
        path.require_same_grid(SamplePath(TimeGrid(1.0, 20), np.zeros(21), label='b'))
    assert list(path.to_frame().columns) == ['t', 'value']


def test_empirical_cf_rejects_empty_input():
    with pytest.raises(EmptyInputError):
        empirical_cf([], 1.0)


def test_levy_path_starts_at_zero_and_is_reproducible():
    grid = TimeGrid(2.0, 500)
    first = simulate_levy_path(1.5, 0.0, grid, make_stream(9, 4))
    second = simulate_levy_path(1.5, 0.0, grid, make_stream(9, 4))
    other = simulate_levy_path(1.5, 0.0, grid, make_stream(9, 5))
    assert first.values[0] == 0.0
    assert np.array_equal(first.values, second.values)
    assert not np.array_equal(first.values, other.values)
    assert np.all(np.diff(running_sup_abs(first)) >= 0.0)


def test_levy_path_needs_model_alpha():
    with pytest.raises(DomainError):
        simulate_levy_path(0.9, 0.0, TimeGrid(1.0, 10), make_stream(0, 0))


def test_streams_depend_only_on_their_key():
    factory = StreamFactory(42)
    a = factory.stream(7).standard_normal(5)
    factory.stream(3).standard_normal(100)
    b = factory.stream(7).standard_normal(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, factory.stream(7, channel=1).standard_normal(5))
    assert factory.fork(1).seed != factory.fork(2).seed
    with pytest.raises(ValueError):
        make_stream(1, -1)


def test_moment_bound_profile_shape():
    profile = moment_bound_profile(1.8, 0.0, [0.5, 1.0, 2.0], n_steps=400, n_reps=400,
                                   streams=StreamFactory(11))
    assert list(profile.columns) == ['horizon', 'mean_sup', 'ratio']
    assert np.all(np.diff(profile['mean_sup']) > 0.0)
    ratios = profile['ratio'].to_numpy()
    assert ratios.max() / ratios.min() < 1.5


@pytest.mark.parametrize("alpha,beta", [(1.5, 0.0), (1.3, 0.5)])
def test_levy_path_is_self_similar(alpha, beta):
    n_reps, c = 4000, 3.0
    unit = [simulate_levy_path(alpha, beta, TimeGrid(1.0, 20), make_stream(17, rep)).values[-1]
            for rep in range(n_reps)]
    stretched = [simulate_levy_path(alpha, beta, TimeGrid(c, 60), make_stream(18, rep)).values[-1]
                 for rep in range(n_reps)]
    report = ks_test(np.array(stretched), c ** (1.0 / alpha) * np.array(unit))
    assert report.passed, report.to_dict()
