"""Haar rotations, SPD roots and chi-square edge scaling."""
from dataclasses import dataclass
import numpy as np
from scipy import linalg

from ..errors import InvalidArgumentError, NotPositiveDefiniteError


def _check_dim(dim: int) -> int:
    if isinstance(dim, bool) or int(dim) != dim or dim < 1:
        raise InvalidArgumentError(f"dimension must be a positive integer, got {dim!r}")
    return int(dim)


@dataclass(frozen=True)
class OrthogonalMatrix:
    """D x D real matrix with orthonormal columns."""
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def orthogonality_error(self) -> float:
        """Max-abs entry of Q^T Q - I."""
        gram = self.entries.T @ self.entries
        return float(np.max(np.abs(gram - np.eye(self.dim))))


@dataclass(frozen=True)
class PreconditionRoot:
    """Lower-triangular L with L L^T = C for a symmetric positive-definite C."""
    root: np.ndarray
    covariance: np.ndarray

    @property
    def dim(self) -> int:
        return self.root.shape[0]

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Map row vectors x -> L x."""
        return points @ self.root.T

    def reconstruction_error(self) -> float:
        return float(np.max(np.abs(self.root @ self.root.T - self.covariance)))


def sample_haar_rotation(dim: int, rng: np.random.Generator) -> OrthogonalMatrix:
    """
    Draw Q uniformly from the orthogonal group O_dim.

    QR-factors a matrix of standard normals and flips each column of Q by the
    sign of the matching diagonal entry of R. Without the sign correction the
    result is not Haar distributed.
    """
    dim = _check_dim(dim)
    gaussian = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(gaussian)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return OrthogonalMatrix(q * signs)


def sample_haar_frame(n_rows: int, n_cols: int, rng: np.random.Generator) -> np.ndarray:
    """First `n_cols` columns of a Haar rotation of size `n_rows` (uniform on the Stiefel manifold)."""
    n_rows = _check_dim(n_rows)
    n_cols = _check_dim(n_cols)
    if n_cols > n_rows:
        raise InvalidArgumentError(f"frame needs n_cols <= n_rows, got {n_cols} > {n_rows}")
    q, r = np.linalg.qr(rng.standard_normal((n_rows, n_cols)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def spd_root(covariance: np.ndarray) -> PreconditionRoot:
    """Cholesky root of a symmetric positive-definite matrix."""
    c = np.asarray(covariance, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise InvalidArgumentError(f"covariance must be square, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise InvalidArgumentError("covariance has non-finite entries")

    scale = max(1.0, float(np.max(np.abs(c))))
    if np.max(np.abs(c - c.T)) > 1e-10 * scale:
        raise InvalidArgumentError("covariance is not symmetric")

    try:
        root = linalg.cholesky(c, lower=True)
    except linalg.LinAlgError as e:
        raise NotPositiveDefiniteError(f"covariance is not positive definite: {e}") from e
    if not np.all(np.diag(root) > 0):
        raise NotPositiveDefiniteError("covariance is singular")

    return PreconditionRoot(root=root, covariance=c)


def chi_square_edge_scale(dim: int, rng: np.random.Generator) -> float:
    """Return sqrt(r) with r ~ chi-square(dim)."""
    dim = _check_dim(dim)
    return float(np.sqrt(rng.chisquare(dim)))
