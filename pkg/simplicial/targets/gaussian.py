"""Multivariate normal targets."""
from dataclasses import dataclass, field
from typing import Literal, Optional, Union
import numpy as np
from scipy import linalg, stats

from ..errors import InvalidArgumentError
from ..geometry.rotation import sample_haar_rotation, spd_root

CovarianceKind = Literal["spherical", "diagonal", "full"]

_LOG_2PI = float(np.log(2.0 * np.pi))


def check_point(point: np.ndarray, dim: int) -> np.ndarray:
    """Coerce `point` to a float vector of length `dim`."""
    x = np.asarray(point, dtype=float)
    if x.shape != (dim,):
        raise InvalidArgumentError(f"point has shape {x.shape}, expected ({dim},)")
    return x


@dataclass
class GaussianSpec:
    """
    Normal distribution N(mean, Sigma) with a cached root and log-determinant.

    `covariance` is the variance sigma^2 (spherical), the vector of variances
    (diagonal) or the full SPD matrix (full).
    """
    mean: np.ndarray
    kind: CovarianceKind
    covariance: Union[float, np.ndarray]
    root: Union[float, np.ndarray] = field(init=False, repr=False)
    log_det: float = field(init=False)

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=float)
        if self.mean.ndim != 1 or self.mean.size < 1:
            raise InvalidArgumentError("mean must be a non-empty vector")
        dim = self.mean.size

        if self.kind == "spherical":
            variance = float(self.covariance)
            if not np.isfinite(variance) or variance <= 0:
                raise InvalidArgumentError(f"spherical variance must be positive, got {variance}")
            self.covariance = variance
            self.root = float(np.sqrt(variance))
            self.log_det = dim * float(np.log(variance))
        elif self.kind == "diagonal":
            variances = np.asarray(self.covariance, dtype=float)
            if variances.shape != (dim,):
                raise InvalidArgumentError(f"diagonal covariance has shape {variances.shape}, expected ({dim},)")
            if not np.all(np.isfinite(variances)) or np.any(variances <= 0):
                raise InvalidArgumentError("diagonal covariance entries must be strictly positive")
            self.covariance = variances
            self.root = np.sqrt(variances)
            self.log_det = float(np.sum(np.log(variances)))
        elif self.kind == "full":
            matrix = np.asarray(self.covariance, dtype=float)
            if matrix.shape != (dim, dim):
                raise InvalidArgumentError(f"full covariance has shape {matrix.shape}, expected ({dim}, {dim})")
            self.covariance = matrix
            self.root = spd_root(matrix).root
            self.log_det = 2.0 * float(np.sum(np.log(np.diag(self.root))))
        else:
            raise InvalidArgumentError(f"unknown covariance kind: {self.kind}")

    @property
    def dim(self) -> int:
        return self.mean.size

    def covariance_matrix(self) -> np.ndarray:
        if self.kind == "spherical":
            return self.covariance * np.eye(self.dim)
        if self.kind == "diagonal":
            return np.diag(self.covariance)
        return self.covariance

    def marginal_variances(self) -> np.ndarray:
        if self.kind == "spherical":
            return np.full(self.dim, self.covariance)
        if self.kind == "diagonal":
            return self.covariance.copy()
        return np.diag(self.covariance).copy()

    def whiten(self, point: np.ndarray) -> np.ndarray:
        """Return z with root @ z = point - mean."""
        centered = point - self.mean
        if self.kind == "full":
            return linalg.solve_triangular(self.root, centered, lower=True)
        return centered / self.root

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        z = rng.standard_normal((n, self.dim))
        if self.kind == "full":
            return z @ self.root.T + self.mean
        return z * self.root + self.mean


def spherical(dim: int, variance: float = 1.0, mean: Optional[np.ndarray] = None) -> GaussianSpec:
    return GaussianSpec(np.zeros(dim) if mean is None else mean, "spherical", variance)


def diagonal(variances: np.ndarray, mean: Optional[np.ndarray] = None) -> GaussianSpec:
    variances = np.asarray(variances, dtype=float)
    return GaussianSpec(np.zeros(variances.size) if mean is None else mean, "diagonal", variances)


def full(covariance: np.ndarray, mean: Optional[np.ndarray] = None) -> GaussianSpec:
    covariance = np.asarray(covariance, dtype=float)
    return GaussianSpec(np.zeros(covariance.shape[0]) if mean is None else mean, "full", covariance)


def ill_conditioned_diagonal(dim: int) -> GaussianSpec:
    """Diagonal covariance with variances 1, 2, ..., dim."""
    return diagonal(np.arange(1, dim + 1, dtype=float))


def ill_conditioned_full(dim: int, rng: np.random.Generator) -> GaussianSpec:
    """Full covariance with spectrum 1..dim under a random orthogonal conjugation."""
    q = sample_haar_rotation(dim, rng).entries
    matrix = (q * np.arange(1, dim + 1, dtype=float)) @ q.T
    return full(0.5 * (matrix + matrix.T))


def gaussian_log_density(spec: GaussianSpec, point: np.ndarray) -> float:
    """log N(point; mean, Sigma) including the normalizing constant."""
    x = check_point(point, spec.dim)
    if not np.all(np.isfinite(x)):
        return -np.inf
    z = spec.whiten(x)
    return float(-0.5 * np.dot(z, z) - 0.5 * (spec.dim * _LOG_2PI + spec.log_det))


def gaussian_log_density_many(spec: GaussianSpec, points: np.ndarray) -> np.ndarray:
    x = np.asarray(points, dtype=float)
    if x.ndim != 2 or x.shape[1] != spec.dim:
        raise InvalidArgumentError(f"points have shape {x.shape}, expected (n, {spec.dim})")
    finite = np.all(np.isfinite(x), axis=1)
    centered = np.where(finite[:, None], x - spec.mean, 0.0)
    if spec.kind == "full":
        z = linalg.solve_triangular(spec.root, centered.T, lower=True).T
    else:
        z = centered / spec.root
    values = -0.5 * np.sum(z * z, axis=1) - 0.5 * (spec.dim * _LOG_2PI + spec.log_det)
    return np.where(finite, values, -np.inf)


class GaussianTarget:
    """TargetModel backed by a GaussianSpec."""

    def __init__(self, spec: GaussianSpec, descriptor: Optional[str] = None):
        self.spec = spec
        self.dim = spec.dim
        self.descriptor = descriptor or f"gaussian-{spec.kind}-{spec.dim}d"
        self._marginal_sd = np.sqrt(spec.marginal_variances())

    def log_density(self, point: np.ndarray) -> float:
        # Same code path as the batch evaluation so cached values agree bitwise.
        x = check_point(point, self.dim)
        return float(gaussian_log_density_many(self.spec, x[None, :])[0])

    def log_density_many(self, points: np.ndarray) -> np.ndarray:
        """Row-wise log-density for an (n, dim) array."""
        return gaussian_log_density_many(self.spec, points)

    def mode_centers(self) -> np.ndarray:
        return self.spec.mean[None, :].copy()

    def marginal_cdf(self, coordinate: int, value: float) -> float:
        return float(stats.norm.cdf(value, loc=self.spec.mean[coordinate], scale=self._marginal_sd[coordinate]))

    def marginal_quantile(self, coordinate: int, prob: np.ndarray) -> np.ndarray:
        return stats.norm.ppf(prob, loc=self.spec.mean[coordinate], scale=self._marginal_sd[coordinate])


__all__ = [
    "CovarianceKind",
    "GaussianSpec",
    "GaussianTarget",
    "check_point",
    "diagonal",
    "full",
    "gaussian_log_density",
    "gaussian_log_density_many",
    "ill_conditioned_diagonal",
    "ill_conditioned_full",
    "spherical",
]
