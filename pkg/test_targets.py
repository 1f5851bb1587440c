#!/usr/bin/env python3
"""Tests for the Gaussian, mixture and GP classification targets and the election loader."""

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent))

import numpy as np
import pytest
from scipy import stats

from simplicial.errors import DatasetError, InvalidArgumentError, NotPositiveDefiniteError
from simplicial.targets import (
    GaussianTarget,
    GpClassificationModel,
    GpHyper,
    GpLatentTarget,
    MixtureSpec,
    MixtureTarget,
    bimodal_mixture,
    build_gp_kernel,
    full,
    gaussian_log_density,
    gp_hyper_conditional,
    gp_latent_log_density,
    hyper_log_conditional,
    ill_conditioned_diagonal,
    ill_conditioned_full,
    load_election_csv,
    misclassifying_start,
    mixture_log_density,
    spherical,
)

DATASET = Path(__file__).parent / "data" / "election_2016.csv"


def create_mock_dataset(tmp_path, edit=None):
    """Copy the real CSV into tmp_path, optionally editing its lines."""
    lines = DATASET.read_text(encoding="utf-8").splitlines()
    if edit is not None:
        lines = edit(lines)
    path = tmp_path / "election.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def create_mock_model(n=6, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, 3))
    y = (rng.random(n) < 0.5).astype(int)
    return GpClassificationModel(X, y, GpHyper(eta2=1.0, xi2=1.0, rho2=1.0, sigma2=0.1))


def test_standard_normal_at_mean():
    for dim in (1, 4, 10):
        expected = -0.5 * dim * np.log(2 * np.pi)
        assert gaussian_log_density(spherical(dim), np.zeros(dim)) == pytest.approx(expected, abs=1e-12)


def test_full_covariance_matches_scipy():
    rng = np.random.default_rng(1)
    spec = ill_conditioned_full(5, rng)
    point = rng.standard_normal(5)
    expected = stats.multivariate_normal(mean=np.zeros(5), cov=spec.covariance_matrix()).logpdf(point)
    assert gaussian_log_density(spec, point) == pytest.approx(expected, rel=1e-10)


def test_non_finite_point_has_zero_density():
    target = GaussianTarget(spherical(3))
    assert target.log_density(np.array([0.0, np.inf, 0.0])) == -np.inf
    assert target.log_density(np.array([np.nan, 0.0, 0.0])) == -np.inf


def test_batch_and_single_evaluation_agree():
    rng = np.random.default_rng(4)
    target = GaussianTarget(ill_conditioned_full(4, rng))
    points = rng.standard_normal((20, 4))
    batch = target.log_density_many(points)
    singles = np.array([target.log_density(p) for p in points])
    assert np.array_equal(batch, singles)


def test_point_shape_is_checked():
    with pytest.raises(InvalidArgumentError):
        GaussianTarget(spherical(3)).log_density(np.zeros(4))


def test_ill_conditioned_spectra():
    assert np.array_equal(ill_conditioned_diagonal(4).marginal_variances(), [1.0, 2.0, 3.0, 4.0])
    spec = ill_conditioned_full(6, np.random.default_rng(9))
    eigenvalues = np.linalg.eigvalsh(spec.covariance_matrix())
    assert np.allclose(eigenvalues, np.arange(1, 7), atol=1e-9)


def test_full_covariance_must_be_positive_definite():
    with pytest.raises(NotPositiveDefiniteError):
        full(np.array([[1.0, 2.0], [2.0, 1.0]]))


def test_mixture_matches_log_sum_exp():
    spec = bimodal_mixture(2, separation=3.0)
    point = np.array([1.0, 2.0])
    expected = np.log(
        0.5 * stats.multivariate_normal(np.zeros(2)).pdf(point)
        + 0.5 * stats.multivariate_normal(np.full(2, 3.0)).pdf(point)
    )
    assert mixture_log_density(spec, point) == pytest.approx(expected, rel=1e-12)


def test_mixture_far_from_modes_stays_finite():
    value = mixture_log_density(bimodal_mixture(3), np.full(3, 60.0))
    assert np.isfinite(value)


def test_mixture_weights_are_validated():
    with pytest.raises(InvalidArgumentError):
        MixtureSpec([(0.7, spherical(2)), (0.7, spherical(2))])
    with pytest.raises(InvalidArgumentError):
        MixtureSpec([(1.0, spherical(2)), (0.0, spherical(2))])
    with pytest.raises(InvalidArgumentError):
        MixtureSpec([(0.5, spherical(2)), (0.5, spherical(3))])


def test_bimodal_marginal_median_is_midpoint():
    target = MixtureTarget(bimodal_mixture(3, separation=5.0))
    assert target.marginal_quantile(0, 0.5) == pytest.approx(2.5, abs=1e-8)
    assert target.marginal_cdf(1, 2.5) == pytest.approx(0.5, abs=1e-12)
    assert target.mode_centers().shape == (2, 3)


def test_bimodal_density_integrates_to_one():
    # Importance sampling from a wide Gaussian that covers both modes.
    spec = bimodal_mixture(2)
    proposal = stats.multivariate_normal(mean=np.full(2, 2.5), cov=9.0 * np.eye(2))
    draws = proposal.rvs(size=40000, random_state=np.random.default_rng(12))
    log_target = np.array([mixture_log_density(spec, x) for x in draws])
    weights = np.exp(log_target - proposal.logpdf(draws))
    assert weights.mean() == pytest.approx(1.0, abs=0.05)


def test_gp_kernel_is_symmetric_positive_definite():
    model = create_mock_model(n=8)
    kernel = build_gp_kernel(model.X, model.hyper)
    assert np.array_equal(kernel, kernel.T)
    assert np.min(np.linalg.eigvalsh(kernel)) > 0
    assert np.allclose(np.diag(kernel), 1.0 + 1.0 + 0.1)


def test_gp_kernel_entries_for_three_points():
    X = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 2.0]])
    kernel = build_gp_kernel(X, GpHyper(eta2=2.0, xi2=0.5, rho2=0.3, sigma2=0.1))
    expected = np.array([
        [2.6, 0.5 + 2 * np.exp(-0.3), 0.5 + 2 * np.exp(-1.2)],
        [0.5 + 2 * np.exp(-0.3), 2.6, 0.5 + 2 * np.exp(-1.5)],
        [0.5 + 2 * np.exp(-1.2), 0.5 + 2 * np.exp(-1.5), 2.6],
    ])
    assert np.allclose(kernel, expected, rtol=0, atol=1e-12)


def dense_hyper_conditional(model, hyper, theta):
    kernel = build_gp_kernel(model.X, hyper)
    prior = stats.norm.logpdf(np.log(hyper.as_vector()), loc=0.0, scale=3.0).sum()
    return stats.multivariate_normal(np.zeros(model.n), kernel).logpdf(theta) + prior


def test_hyper_conditional_matches_dense_evaluation():
    model = create_mock_model(n=7, seed=2)
    theta = np.random.default_rng(8).standard_normal(7)
    a = GpHyper(eta2=1.5, xi2=0.7, rho2=0.4, sigma2=0.2)
    b = GpHyper(eta2=0.6, xi2=2.0, rho2=1.3, sigma2=0.05)

    assert gp_hyper_conditional(model, a, theta) == pytest.approx(dense_hyper_conditional(model, a, theta), rel=1e-9)
    log_ratio = gp_hyper_conditional(model, a, theta) - gp_hyper_conditional(model, b, theta)
    dense_ratio = dense_hyper_conditional(model, a, theta) - dense_hyper_conditional(model, b, theta)
    assert log_ratio == pytest.approx(dense_ratio, abs=1e-8)

    # the one-dimensional slices agree with the joint conditional
    for index, name in enumerate(GpHyper.NAMES):
        log_value = np.log(getattr(b, name))
        conditional = hyper_log_conditional(model, theta, index, base=a)
        assert conditional(log_value) == gp_hyper_conditional(model, a.with_log_value(index, log_value), theta)


def test_gp_latent_density_is_likelihood_plus_prior():
    model = create_mock_model(n=6, seed=3)
    theta = np.random.default_rng(5).standard_normal(6)
    likelihood = np.sum(model.y * theta - np.log1p(np.exp(theta)))
    prior = stats.multivariate_normal(np.zeros(6), model.kernel).logpdf(theta)
    assert gp_latent_log_density(model, theta) == pytest.approx(likelihood + prior, rel=1e-10)
    assert GpLatentTarget(model).log_density(theta) == gp_latent_log_density(model, theta)


def test_overflowing_hyper_has_zero_conditional_density():
    model = create_mock_model()
    theta = np.zeros(model.n)
    conditional = hyper_log_conditional(model, theta, index=0)
    assert np.isfinite(conditional(0.0))
    assert conditional(800.0) == -np.inf
    assert conditional(np.nan) == -np.inf


def test_hyper_conditional_holds_base_values():
    model = create_mock_model()
    theta = np.zeros(model.n)
    base = GpHyper(eta2=2.0, xi2=1.0, rho2=1.0, sigma2=0.1)
    with_base = hyper_log_conditional(model, theta, index=2, base=base)
    default = hyper_log_conditional(model, theta, index=2)
    assert with_base(0.0) != default(0.0)
    assert model.hyper.eta2 == 1.0


def test_misclassifying_start_flips_every_sign():
    labels = np.array([1, 0, 1, 1, 0])
    theta = misclassifying_start(labels, magnitude=2.0)
    assert np.array_equal(theta, [-2.0, 2.0, -2.0, -2.0, 2.0])


def test_election_dataset_loads_and_standardizes():
    dataset = load_election_csv(DATASET)
    assert dataset.n == 48
    assert int(dataset.y.sum()) == 29
    assert dataset.X.shape == (48, 3)
    assert np.allclose(dataset.X.mean(axis=0), 0.0, atol=1e-12)
    assert np.allclose(dataset.X.std(axis=0), 1.0, atol=1e-12)
    assert len(set(dataset.state_codes)) == 48


def test_election_bad_header(tmp_path):
    path = create_mock_dataset(tmp_path, lambda lines: ["code,lat,lon,pop,label"] + lines[1:])
    with pytest.raises(DatasetError) as e:
        load_election_csv(path)
    assert e.value.row == 1


def test_election_bad_label(tmp_path):
    def edit(lines):
        fields = lines[2].split(",")
        fields[-1] = "2"
        lines[2] = ",".join(fields)
        return lines

    with pytest.raises(DatasetError) as e:
        load_election_csv(create_mock_dataset(tmp_path, edit))
    assert e.value.row == 3
    assert e.value.column == "label"


def test_election_non_numeric_latitude(tmp_path):
    def edit(lines):
        fields = lines[5].split(",")
        fields[1] = "north"
        lines[5] = ",".join(fields)
        return lines

    with pytest.raises(DatasetError) as e:
        load_election_csv(create_mock_dataset(tmp_path, edit))
    assert e.value.row == 6
    assert e.value.column == "latitude"


def test_election_row_count(tmp_path):
    with pytest.raises(DatasetError, match="48"):
        load_election_csv(create_mock_dataset(tmp_path, lambda lines: lines[:-1]))


def test_election_missing_file(tmp_path):
    with pytest.raises(DatasetError):
        load_election_csv(tmp_path / "missing.csv")
