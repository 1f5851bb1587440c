#!/usr/bin/env python3
"""Tests for ESS estimation and the chain summaries used by the experiments."""

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent))

import numpy as np
import pytest
from scipy import stats

from simplicial.diagnostics import (
    acceptance_rate,
    autocovariance,
    effective_sample_size,
    ess_report,
    first_iteration_below,
    intermodal_jumps,
    ks_critical_value,
    ks_statistic,
    misclassification_count,
    misclassification_series,
    moved_fraction,
    nearest_mode,
    qq_points,
    standard_error,
)
from simplicial.errors import InvalidArgumentError, UndefinedEssError
from simplicial.samplers import KernelSpec, run_chain
from simplicial.targets import GaussianTarget, spherical
from simplicial.types import ChainTrace


def create_mock_trace(states):
    """Trace over hand-picked states; acceptance flags follow from state changes."""
    states = np.asarray(states, dtype=float)
    moved = [bool(np.any(a != b)) for a, b in zip(states[:-1], states[1:])]
    return ChainTrace(
        states=states,
        selected_index_history=[0 if m else 1 for m in moved],
        accept_flags=moved,
        wall_time_seconds=1.0,
        rng_seed=0,
    )


def ar1_series(phi, n, seed):
    rng = np.random.default_rng(seed)
    x = np.empty(n)
    x[0] = rng.standard_normal() / np.sqrt(1 - phi ** 2)
    noise = rng.standard_normal(n)
    for t in range(1, n):
        x[t] = phi * x[t - 1] + noise[t]
    return x


def test_autocovariance_matches_direct_sum():
    x = np.random.default_rng(0).standard_normal(50)
    acov = autocovariance(x)
    c = x - x.mean()
    for k in (0, 1, 5, 49):
        assert acov[k] == pytest.approx(np.sum(c[:50 - k] * c[k:]) / 50, abs=1e-12)


def test_ess_of_independent_draws_is_close_to_n():
    x = np.random.default_rng(1).standard_normal(10000)
    ess = effective_sample_size(x)
    assert 8500 <= ess <= 10000


def test_ess_of_ar1_process():
    n = 100000
    ess = effective_sample_size(ar1_series(0.9, n, seed=2))
    expected = n * (1 - 0.9) / (1 + 0.9)
    assert ess == pytest.approx(expected, rel=0.1)


def test_ess_of_duplicated_pairs_is_half():
    draws = np.random.default_rng(3).standard_normal(5000)
    ess = effective_sample_size(np.repeat(draws, 2))
    assert ess == pytest.approx(5000, rel=0.1)


def test_ess_is_invariant_to_shift_and_scale():
    x = ar1_series(0.5, 2000, seed=4)
    assert effective_sample_size(3.0 * x + 7.0) == pytest.approx(effective_sample_size(x), rel=1e-9)


def test_ess_rejects_degenerate_series():
    with pytest.raises(UndefinedEssError):
        effective_sample_size(np.full(100, 2.5))
    with pytest.raises(InvalidArgumentError):
        effective_sample_size(np.arange(5.0))
    with pytest.raises(InvalidArgumentError):
        effective_sample_size(np.append(np.arange(20.0), np.nan))


def test_ess_report_per_second_rates():
    samples = np.random.default_rng(5).standard_normal((1000, 3))
    report = ess_report(samples, wall_time_seconds=2.0)
    assert report.per_coordinate_ess.shape == (3,)
    assert report.min_ess <= report.mean_ess
    assert report.mean_esss == pytest.approx(report.mean_ess / 2.0)
    assert ess_report(samples).mean_esss is None
    assert ess_report(samples, wall_time_seconds=0.0).min_esss is None


def test_alternating_modes_jump_every_step():
    centers = np.array([[0.0, 0.0], [5.0, 5.0]])
    trace = create_mock_trace([centers[i % 2] for i in range(10)])
    assert intermodal_jumps(trace, centers) == 9


def test_hand_built_jump_sequence():
    centers = np.array([[-1.0], [1.0]])
    trace = create_mock_trace([[-1.1], [-0.9], [0.8], [1.2], [-0.5], [0.3]])
    assert list(nearest_mode(trace, centers)) == [0, 0, 1, 1, 0, 1]
    assert intermodal_jumps(trace, centers) == 3


def test_collapsed_modes_never_jump():
    centers = np.zeros((2, 2))
    trace = create_mock_trace(np.random.default_rng(6).standard_normal((20, 2)))
    assert intermodal_jumps(trace, centers) == 0


def test_nearest_mode_needs_two_centers():
    with pytest.raises(InvalidArgumentError):
        nearest_mode(np.zeros((3, 2)), np.zeros((1, 2)))


def test_misclassification_count():
    labels = np.array([1, 0, 1, 0])
    assert misclassification_count(np.array([2.0, -2.0, 1.0, -1.0]), labels) == 0
    assert misclassification_count(np.array([-2.0, 2.0, -1.0, 1.0]), labels) == 4
    # zero latent predicts label 0
    assert misclassification_count(np.array([0.0, 0.0, 1.0, -1.0]), labels) == 1
    with pytest.raises(InvalidArgumentError):
        misclassification_count(np.zeros(3), labels)


def test_misclassification_series_per_state():
    labels = np.array([1, 0])
    states = np.array([[-1.0, 1.0], [1.0, 1.0], [1.0, -1.0]])
    assert list(misclassification_series(states, labels)) == [2, 1, 0]


def test_first_iteration_below_threshold():
    assert first_iteration_below([48, 30, 9, 12], 10) == 2
    assert first_iteration_below([48, 48, 48], 10) is None
    assert first_iteration_below([48, 30], 48) == 0
    with pytest.raises(InvalidArgumentError):
        first_iteration_below([1, 2], -1)


def test_qq_points_on_exact_quantiles():
    n = 500
    probabilities = (np.arange(1, n + 1) - 0.5) / n
    samples = stats.norm.ppf(probabilities)[::-1]
    result = qq_points(samples, stats.norm.ppf)
    assert result.correlation == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(result.empirical, result.theoretical)
    assert not result.degenerate


def test_qq_points_constant_samples_are_degenerate():
    result = qq_points(np.ones(200), stats.norm.ppf)
    assert result.degenerate
    assert result.correlation is None
    with pytest.raises(InvalidArgumentError):
        qq_points(np.ones(50), stats.norm.ppf)


def test_ks_statistic_of_true_distribution():
    samples = np.random.default_rng(7).standard_normal(2000)
    assert ks_statistic(samples, stats.norm.cdf) < ks_critical_value(2000, alpha=0.01)
    assert ks_statistic(samples + 1.0, stats.norm.cdf) > ks_critical_value(2000, alpha=0.01)


def test_standard_error():
    assert standard_error([1.0, 2.0, 3.0, 4.0]) == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2)
    assert standard_error([1.0]) is None
    assert standard_error([1.0, None, float("nan")]) is None


def test_moved_fraction_matches_acceptance_flags():
    trace = run_chain(KernelSpec(algorithm="simpl"), GaussianTarget(spherical(3)), 2000, np.zeros(3), seed=3)
    assert moved_fraction(trace.states) == pytest.approx(acceptance_rate(trace))


def test_acceptance_rate_of_empty_trace():
    with pytest.raises(InvalidArgumentError):
        acceptance_rate(create_mock_trace(np.zeros((1, 2))))
