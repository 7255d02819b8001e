"""Particle-flow unstructured mesh generation."""

from ._core import Error, delaunay, kernel, mesh, tet_quality, update_target_count

__all__ = ["Error", "delaunay", "kernel", "mesh", "tet_quality", "update_target_count"]
__version__ = "0.1.0"
