"""黎曼球面几何：点、弦距离与等面积网格"""

from .grid import GridScheme, SphereGrid, build_scheme
from .point import (
    INF,
    OVERFLOW_RADIUS,
    SpherePoint,
    chordal_dist,
    chordal_dist_array,
    clamp_points,
    infinite_mask,
    to_sphere_xyz,
)

__all__ = [
    "GridScheme",
    "SphereGrid",
    "build_scheme",
    "INF",
    "OVERFLOW_RADIUS",
    "SpherePoint",
    "chordal_dist",
    "chordal_dist_array",
    "clamp_points",
    "infinite_mask",
    "to_sphere_xyz",
]
