"""Simplex geometry and random rotations."""
from .rotation import (
    OrthogonalMatrix,
    PreconditionRoot,
    sample_haar_rotation,
    sample_haar_frame,
    spd_root,
    chi_square_edge_scale,
)
from .simplex import (
    SimplexVertexSet,
    AffineReflection,
    build_base_simplex,
    embed_simplex,
    map_simplex,
    project_vertices,
    bisecting_reflection,
)

__all__ = [
    'OrthogonalMatrix',
    'PreconditionRoot',
    'sample_haar_rotation',
    'sample_haar_frame',
    'spd_root',
    'chi_square_edge_scale',
    'SimplexVertexSet',
    'AffineReflection',
    'build_base_simplex',
    'embed_simplex',
    'map_simplex',
    'project_vertices',
    'bisecting_reflection',
]
