"""
Tests for the bias constant, the limit law and the KS helpers
"""

import numpy as np
import pytest

from src.analysis.asymptotics import (
    LimitLawSpec,
    bias_constant_m,
    drift_derivative,
    ks_critical_value,
    ks_table,
    ks_test,
    ks_two_sample,
    limit_law_reference,
    limit_law_sample,
    time_change_check,
)
from src.estimation.kernels import build_kernel, make_kernel
from src.sde.multipliers import constant_multiplier, rational_multiplier, sine_multiplier
from src.stable.random_streams import StreamFactory, make_stream
from src.stable.stable_core import TimeGrid, sample_standard_stable
from src.utils.errors import DomainError, EmptyInputError, SmoothnessError, WindowError


def _shifted_uniform():
    return build_kernel("shifted_uniform", 0, lambda u: np.full_like(np.asarray(u, dtype=float), 0.5),
                        (-0.5, 1.5))


def test_drift_derivatives_match_finite_differences():
    mult = sine_multiplier(1.2, 0.7)
    h = 1e-4
    for order in (1, 2, 3):
        for t in (0.4, 1.3):
            numeric = (drift_derivative(mult, 2.0, t + h, order - 1)
                       - drift_derivative(mult, 2.0, t - h, order - 1)) / (2 * h)
            assert drift_derivative(mult, 2.0, t, order) == pytest.approx(numeric, abs=1e-5)


def test_drift_derivative_of_order_zero_is_the_drift():
    t = 0.9
    assert drift_derivative(sine_multiplier(), 1.0, t, 0) == pytest.approx(np.sin(t) * np.exp(1.0 - np.cos(t)))
    with pytest.raises(DomainError):
        drift_derivative(sine_multiplier(), 1.0, t, -1)


def test_bias_constant_vanishes_for_symmetric_kernel_and_zero_drift():
    assert bias_constant_m(sine_multiplier(), 1.0, make_kernel(0, "epanechnikov"), 0, 1.0) == pytest.approx(
        0.0, abs=1e-12)
    assert bias_constant_m(constant_multiplier(0.0), 1.0, make_kernel(2), 2, 1.0) == 0.0


def test_bias_constant_of_shifted_kernel():
    c, t = 0.8, 1.0
    m = bias_constant_m(constant_multiplier(c), 1.0, _shifted_uniform(), 0, t)
    assert m == pytest.approx(c ** 2 * np.exp(c * t) * 0.5, rel=1e-8)


def test_bias_constant_needs_enough_derivatives():
    with pytest.raises(SmoothnessError):
        bias_constant_m(rational_multiplier(), 1.0, make_kernel(4), 4, 1.0)
    bias_constant_m(rational_multiplier(), 1.0, make_kernel(3), 3, 1.0)


def test_nonnegative_kernel_law_is_a_single_stable_draw():
    G = make_kernel(0, "uniform")
    spec = LimitLawSpec.from_kernel(G, 1.5, shift=0.3)
    assert spec.neg_weight == 0.0
    assert spec.pos_weight == pytest.approx(2.0 ** (-1.0 / 3.0))

    draws = limit_law_sample(spec, 1000, make_stream(5, 0))
    u1 = sample_standard_stable(1.5, 0.0, make_stream(5, 0), size=1000)
    assert np.allclose(draws, spec.pos_weight * u1 + 0.3)


def test_symmetric_limit_law_is_centred():
    spec = LimitLawSpec.from_kernel(make_kernel(2), 1.5)
    assert spec.pos_weight > 0.0 and spec.neg_weight > 0.0
    draws = limit_law_sample(spec, 20_000, make_stream(8, 0))
    assert abs(np.median(draws)) < 0.06


def test_limit_law_spec_validation():
    with pytest.raises(DomainError):
        LimitLawSpec(-1.0, 0.0, 0.0, 1.5)
    with pytest.raises(DomainError):
        LimitLawSpec(1.0, 0.0, 0.0, 2.5)
    with pytest.raises(DomainError):
        limit_law_sample(LimitLawSpec(1.0, 0.0, 0.0, 1.5), -1, make_stream(0, 0))


def test_limit_law_reference_is_reproducible():
    spec = LimitLawSpec.from_kernel(make_kernel(1, "epanechnikov"), 1.8)
    assert np.array_equal(limit_law_reference(spec, 100, StreamFactory(3)),
                          limit_law_reference(spec, 100, StreamFactory(3)))


def test_ks_extremes_and_invariance():
    a = make_stream(1, 0).standard_normal(500)
    assert ks_two_sample(a, a) == 0.0
    assert ks_two_sample([0.0], [1.0]) == 1.0
    b = make_stream(1, 1).standard_normal(700)
    assert ks_two_sample(np.exp(a), np.exp(b)) == pytest.approx(ks_two_sample(a, b))
    with pytest.raises(EmptyInputError):
        ks_test([], [1.0])


def test_ks_on_same_law_stays_below_critical_value():
    a = make_stream(2, 0).standard_normal(5000)
    b = make_stream(2, 1).standard_normal(5000)
    threshold = ks_critical_value(5000, 5000)
    assert threshold == pytest.approx(0.0326, abs=1e-3)
    report = ks_test(a, b, threshold)
    assert report.passed
    assert set(report.to_dict()) == {'ks_statistic', 'threshold', 'pass', 'pvalue'}


def test_ks_critical_value():
    assert ks_critical_value(10_000, 10_000) == pytest.approx(0.0230, abs=1e-4)
    with pytest.raises(EmptyInputError):
        ks_critical_value(0, 10)


def test_ks_table_columns():
    report = ks_test([0.0, 1.0], [0.5, 1.5])
    table = ks_table([(0.1, report)])
    assert list(table.columns) == ['eps', 'ks_statistic', 'threshold', 'pass', 'pvalue']


def test_window_outside_horizon_gives_degenerate_check():
    grid = TimeGrid(2.0, 1000)
    report = time_change_check(make_kernel(0, "uniform"), 0.1, -1.0, grid, 1.5, 50, StreamFactory(0))
    assert report.statistic == 0.0 and report.passed


def test_window_straddling_the_edge_is_rejected():
    grid = TimeGrid(2.0, 1000)
    with pytest.raises(WindowError):
        time_change_check(make_kernel(0, "uniform"), 0.1, 0.05, grid, 1.5, 10, StreamFactory(0))


@pytest.mark.parametrize("family,k,alpha,beta", [
    ("epanechnikov", 1, 1.5, 0.0),
    ("uniform", 0, 1.5, 0.0),
    ("epanechnikov", 0, 2.0, 0.0),
    ("polynomial", 2, 1.5, 0.5),
    ("polynomial", 2, 1.2, -0.7),
])
def test_time_change_representation_matches_discretised_integral(family, k, alpha, beta):
    grid = TimeGrid(2.0, 2000)
    n_reps = 2000
    report = time_change_check(make_kernel(k, family), 0.1, 1.0, grid, alpha, n_reps, StreamFactory(31),
                               beta=beta)
    assert report.passed, report.to_dict()


@pytest.mark.slow
@pytest.mark.parametrize("family", ["uniform", "epanechnikov"])
@pytest.mark.parametrize("alpha", [1.3, 1.7])
def test_time_change_representation_large_sample(family, alpha):
    n_reps = 10_000
    report = time_change_check(make_kernel(0, family), 0.1, 1.0, TimeGrid(2.0, 2000), alpha, n_reps,
                               StreamFactory(37))
    assert report.threshold == pytest.approx(0.0230, abs=1e-4)
    assert report.passed, report.to_dict()
