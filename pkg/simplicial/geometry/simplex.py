"""Regular simplex construction and the rotate/scale/precondition/translate map."""
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union
import numpy as np

from ..errors import InvalidArgumentError
from .rotation import OrthogonalMatrix, PreconditionRoot


@dataclass(frozen=True)
class SimplexVertexSet:
    """
    Equidistant vertices with the last vertex at the origin.

    `vertices` has one row per vertex. For a regular simplex built in its own
    space there are dim + 1 rows; an embedded simplex (see `embed_simplex`)
    keeps its vertex count and gains zero coordinates.
    """
    dim: int
    edge_length: float
    vertices: np.ndarray

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    def pairwise_distances(self) -> np.ndarray:
        return _pairwise_distances(self.vertices)


def _pairwise_distances(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))


@lru_cache(maxsize=16)
def _unit_vertices(dim: int) -> np.ndarray:
    # {e_1..e_D, alpha*1} has pairwise distance sqrt(2); shift alpha*1 to the origin.
    alpha = (1.0 - np.sqrt(dim + 1.0)) / dim
    vertices = (np.vstack([np.eye(dim), np.full((1, dim), alpha)]) - alpha) / np.sqrt(2.0)
    vertices[-1] = 0.0
    vertices.setflags(write=False)
    return vertices


def _base_vertices(dim: int, edge_length: float) -> np.ndarray:
    unit = _unit_vertices(dim)
    vertices = unit if edge_length == 1.0 else edge_length * unit
    vertices.setflags(write=False)
    return vertices


def build_base_simplex(dim: int, edge_length: float) -> SimplexVertexSet:
    """Regular simplex with dim + 1 vertices, edge `edge_length`, last vertex 0."""
    if isinstance(dim, bool) or int(dim) != dim or dim < 1:
        raise InvalidArgumentError(f"dimension must be a positive integer, got {dim!r}")
    if not np.isfinite(edge_length) or edge_length <= 0:
        raise InvalidArgumentError(f"edge_length must be positive, got {edge_length!r}")
    vertices = _base_vertices(int(dim), float(edge_length))
    return SimplexVertexSet(dim=int(dim), edge_length=float(edge_length), vertices=vertices)


def embed_simplex(base: SimplexVertexSet, ambient_dim: int) -> SimplexVertexSet:
    """Pad a lower-dimensional simplex with zero coordinates up to `ambient_dim`."""
    if ambient_dim < base.dim:
        raise InvalidArgumentError(
            f"cannot embed a {base.dim}-dimensional simplex in {ambient_dim} dimensions"
        )
    if ambient_dim == base.dim:
        return base
    padded = np.zeros((base.n_vertices, ambient_dim))
    padded[:, :base.dim] = base.vertices
    padded.setflags(write=False)
    return SimplexVertexSet(dim=ambient_dim, edge_length=base.edge_length, vertices=padded)


def map_simplex(
    base: SimplexVertexSet,
    rotation: Union[OrthogonalMatrix, np.ndarray],
    scale: float = 1.0,
    root: Optional[PreconditionRoot] = None,
    center: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Rotate, scale, precondition and translate the simplex vertices.

    Returns an array of shape (n_vertices, dim) whose row d is
    root @ (scale * Q @ v_d) + center. The origin vertex maps exactly to
    `center`.
    """
    q = rotation.entries if isinstance(rotation, OrthogonalMatrix) else np.asarray(rotation)
    dim = base.dim
    if q.shape != (dim, dim):
        raise InvalidArgumentError(f"rotation shape {q.shape} does not match simplex dimension {dim}")
    if root is not None and root.dim != dim:
        raise InvalidArgumentError(f"precondition root dimension {root.dim} != {dim}")
    if center is None:
        center = np.zeros(dim)
    center = np.asarray(center, dtype=float)
    if center.shape != (dim,):
        raise InvalidArgumentError(f"center shape {center.shape} does not match dimension {dim}")
    if not np.isfinite(scale) or scale <= 0:
        raise InvalidArgumentError(f"scale must be positive, got {scale!r}")

    offsets = base.vertices @ q.T
    if scale != 1.0:
        offsets = scale * offsets
    if root is not None:
        offsets = root.apply(offsets)
    points = offsets + center
    points[-1] = center
    return points


def project_vertices(points: np.ndarray, dim: int) -> np.ndarray:
    """Keep the first `dim` coordinates of each row (the W map)."""
    if dim < 1 or dim > points.shape[-1]:
        raise InvalidArgumentError(f"cannot project {points.shape[-1]} coordinates onto {dim}")
    return points[..., :dim]


@dataclass(frozen=True)
class AffineReflection:
    """x -> matrix @ x + offset, a reflection through a hyperplane."""
    matrix: np.ndarray
    offset: np.ndarray

    def apply(self, points: np.ndarray) -> np.ndarray:
        return points @ self.matrix.T + self.offset


def bisecting_reflection(a: np.ndarray, b: np.ndarray) -> AffineReflection:
    """Householder reflection through the hyperplane bisecting segment ab; swaps a and b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    direction = b - a
    norm = np.linalg.norm(direction)
    if norm == 0:
        raise InvalidArgumentError("reflection needs two distinct points")
    u = direction / norm
    midpoint = 0.5 * (a + b)
    matrix = np.eye(a.size) - 2.0 * np.outer(u, u)
    offset = 2.0 * np.dot(midpoint, u) * u
    return AffineReflection(matrix=matrix, offset=offset)
