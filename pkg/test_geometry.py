#!/usr/bin/env python3
"""Tests for simplex construction, Haar rotations and SPD roots."""

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent))

import numpy as np
import pytest
from scipy import stats

from simplicial.errors import InvalidArgumentError, NotPositiveDefiniteError
from simplicial.geometry import (
    bisecting_reflection,
    build_base_simplex,
    chi_square_edge_scale,
    embed_simplex,
    map_simplex,
    project_vertices,
    sample_haar_frame,
    sample_haar_rotation,
    spd_root,
)
from simplicial.samplers import SimplicialConfig, propose_simplex


def off_diagonal(matrix):
    mask = ~np.eye(matrix.shape[0], dtype=bool)
    return matrix[mask]


@pytest.mark.parametrize("dim", [1, 2, 3, 5, 32])
def test_base_simplex_is_regular(dim):
    simplex = build_base_simplex(dim, 2.5)
    assert simplex.vertices.shape == (dim + 1, dim)
    assert np.all(simplex.vertices[-1] == 0.0)
    distances = off_diagonal(simplex.pairwise_distances())
    assert np.allclose(distances, 2.5, atol=1e-12)


def test_base_simplex_rejects_bad_arguments():
    with pytest.raises(InvalidArgumentError):
        build_base_simplex(0, 1.0)
    with pytest.raises(InvalidArgumentError):
        build_base_simplex(3, 0.0)
    with pytest.raises(InvalidArgumentError):
        build_base_simplex(3, float("nan"))


def test_base_simplex_vertices_are_read_only():
    simplex = build_base_simplex(4, 1.0)
    with pytest.raises(ValueError):
        simplex.vertices[0, 0] = 5.0


def test_haar_rotations_are_orthogonal_and_uniform():
    rng = np.random.default_rng(7)
    n = 5000
    first_columns = np.empty((n, 3))
    negative_determinants = 0
    for i in range(n):
        q = sample_haar_rotation(3, rng)
        assert q.orthogonality_error() < 1e-10
        first_columns[i] = q.entries[:, 0]
        negative_determinants += np.linalg.det(q.entries) < 0

    assert np.max(np.abs(first_columns.mean(axis=0))) < 0.05
    assert np.max(np.abs(np.cov(first_columns.T) - np.eye(3) / 3)) < 0.05
    # Haar on O(3) includes reflections half the time
    assert abs(negative_determinants / n - 0.5) < 0.05


def test_haar_rotation_is_seed_deterministic():
    a = sample_haar_rotation(6, np.random.default_rng(11)).entries
    b = sample_haar_rotation(6, np.random.default_rng(11)).entries
    assert np.array_equal(a, b)


def test_haar_law_is_left_invariant():
    rng = np.random.default_rng(23)
    fixed = sample_haar_rotation(4, np.random.default_rng(99)).entries
    n = 4000
    plain = [sample_haar_rotation(4, rng).entries for _ in range(n)]
    rotated = [fixed @ sample_haar_rotation(4, rng).entries for _ in range(n)]

    # M Q and Q must have the same law; compare a corner entry and the trace.
    for summary in (lambda q: q[0, 0], np.trace):
        a = np.array([summary(q) for q in plain])
        b = np.array([summary(q) for q in rotated])
        assert stats.ks_2samp(a, b).pvalue > 0.001


def test_haar_in_one_dimension_is_a_fair_sign():
    rng = np.random.default_rng(4)
    draws = np.array([sample_haar_rotation(1, rng).entries[0, 0] for _ in range(10000)])
    assert set(np.unique(draws)) == {-1.0, 1.0}
    assert abs(np.mean(draws == 1.0) - 0.5) < 0.03


def test_haar_frame_has_orthonormal_columns():
    frame = sample_haar_frame(50, 3, np.random.default_rng(3))
    assert frame.shape == (50, 3)
    assert np.allclose(frame.T @ frame, np.eye(3), atol=1e-12)
    with pytest.raises(InvalidArgumentError):
        sample_haar_frame(2, 3, np.random.default_rng(3))


def test_map_simplex_preserves_geometry_and_pins_center():
    rng = np.random.default_rng(5)
    base = build_base_simplex(6, 1.0)
    q = sample_haar_rotation(6, rng)
    center = rng.standard_normal(6)
    points = map_simplex(base, q, scale=3.0, center=center)

    assert np.array_equal(points[-1], center)
    distances = off_diagonal(np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1))
    assert np.allclose(distances, 3.0, atol=1e-9)


def test_map_simplex_applies_precondition_root():
    base = build_base_simplex(2, 1.0)
    root = spd_root(np.diag([4.0, 9.0]))
    points = map_simplex(base, np.eye(2), root=root)
    assert np.allclose(points[:-1], base.vertices[:-1] * np.array([2.0, 3.0]))


def test_map_simplex_rejects_shape_mismatch():
    base = build_base_simplex(3, 1.0)
    with pytest.raises(InvalidArgumentError):
        map_simplex(base, np.eye(4))
    with pytest.raises(InvalidArgumentError):
        map_simplex(base, np.eye(3), center=np.zeros(2))


def test_bisecting_reflection_fixes_other_vertices():
    rng = np.random.default_rng(21)
    for _ in range(300):
        dim = int(rng.integers(1, 33))
        base = build_base_simplex(dim, float(rng.uniform(0.1, 5.0)))
        center = rng.standard_normal(dim)
        points = map_simplex(base, sample_haar_rotation(dim, rng), center=center)
        chosen = int(rng.integers(0, dim))

        reflection = bisecting_reflection(center, points[chosen])
        mapped = reflection.apply(points)

        assert np.allclose(mapped[chosen], center, atol=1e-9)
        assert np.allclose(mapped[-1], points[chosen], atol=1e-9)
        others = [i for i in range(dim) if i != chosen]
        assert np.allclose(mapped[others], points[others], atol=1e-9)


def test_bisecting_reflection_needs_distinct_points():
    with pytest.raises(InvalidArgumentError):
        bisecting_reflection(np.ones(3), np.ones(3))


def test_embed_and_project():
    small = build_base_simplex(2, 1.0)
    embedded = embed_simplex(small, 5)
    assert embedded.vertices.shape == (3, 5)
    assert np.all(embedded.vertices[:, 2:] == 0.0)
    assert np.allclose(off_diagonal(embedded.pairwise_distances()), 1.0)
    assert np.array_equal(project_vertices(embedded.vertices, 2), small.vertices)
    with pytest.raises(InvalidArgumentError):
        embed_simplex(small, 1)


def test_spd_root_reconstructs_matrix():
    rng = np.random.default_rng(2)
    a = rng.standard_normal((5, 5))
    covariance = a @ a.T + 5 * np.eye(5)
    root = spd_root(covariance)
    assert root.reconstruction_error() < 1e-10
    assert np.allclose(np.triu(root.root, 1), 0.0)


def test_spd_root_rejects_bad_matrices():
    with pytest.raises(NotPositiveDefiniteError):
        spd_root(np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(InvalidArgumentError):
        spd_root(np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(InvalidArgumentError):
        spd_root(np.ones((2, 3)))


def test_chi_square_edge_scale_moments():
    rng = np.random.default_rng(8)
    squares = np.array([chi_square_edge_scale(5, rng) ** 2 for _ in range(20000)])
    assert abs(squares.mean() - 5.0) < 0.15


def test_gaussian_scaled_offsets_have_identity_covariance():
    rng = np.random.default_rng(13)
    cfg = SimplicialConfig(edge_length=1.0, variant="gaussian_scaled")
    position = np.zeros(5)
    offsets = np.array([propose_simplex(position, cfg, rng)[0] for _ in range(20000)])
    covariance = offsets.T @ offsets / offsets.shape[0]
    relative = np.linalg.norm(covariance - np.eye(5)) / np.linalg.norm(np.eye(5))
    assert relative < 0.05
