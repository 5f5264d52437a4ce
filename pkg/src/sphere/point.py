"""
黎曼球面上的点与弦距离

点云在内部统一用 complex128 数组表示，∞ 记为 complex(inf, 0)；
模长超过 OVERFLOW_RADIUS 的有限点一律截断为 ∞。
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

OVERFLOW_RADIUS = 1e150
INF = complex(np.inf, 0.0)


@dataclass(frozen=True)
class SpherePoint:
    """黎曼球面上的点：有限复数或无穷远点"""
    re: float = 0.0
    im: float = 0.0
    infinite: bool = False

    def __post_init__(self):
        if self.infinite:
            object.__setattr__(self, "re", 0.0)
            object.__setattr__(self, "im", 0.0)
            return
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError(f"有限点坐标必须是有限实数: ({self.re}, {self.im})")

    @classmethod
    def infinity(cls) -> "SpherePoint":
        return cls(infinite=True)

    @classmethod
    def from_complex(cls, z: Union[complex, float, "SpherePoint"]) -> "SpherePoint":
        """由复数构造，非有限值或超过截断阈值时返回 ∞"""
        if isinstance(z, SpherePoint):
            return z
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return cls.infinity()
        if abs(z) > OVERFLOW_RADIUS:
            return cls.infinity()
        return cls(z.real, z.imag)

    def to_complex(self) -> complex:
        return INF if self.infinite else complex(self.re, self.im)

    def reciprocal(self) -> "SpherePoint":
        """z ↦ 1/z，交换 0 与 ∞"""
        if self.infinite:
            return SpherePoint(0.0, 0.0)
        z = self.to_complex()
        if z == 0:
            return SpherePoint.infinity()
        return SpherePoint.from_complex(1.0 / z)

    def __abs__(self) -> float:
        return math.inf if self.infinite else math.hypot(self.re, self.im)

    def __repr__(self) -> str:
        if self.infinite:
            return "SpherePoint(∞)"
        return f"SpherePoint({self.re!r}, {self.im!r})"


def chordal_dist(p: SpherePoint, q: SpherePoint) -> float:
    """弦距离 2|p−q| / √((1+|p|²)(1+|q|²))，取值于 [0, 2]"""
    p = SpherePoint.from_complex(p)
    q = SpherePoint.from_complex(q)
    if p.infinite and q.infinite:
        return 0.0
    if p.infinite:
        p, q = q, p
    if q.infinite:
        return 2.0 / math.sqrt(1.0 + abs(p) ** 2)
    zp, zq = p.to_complex(), q.to_complex()
    d = 2.0 * abs(zp - zq) / math.sqrt((1.0 + abs(zp) ** 2) * (1.0 + abs(zq) ** 2))
    return min(d, 2.0)


def clamp_points(points: np.ndarray) -> np.ndarray:
    """把非有限值与超大模长统一成 ∞（就地修改并返回）"""
    with np.errstate(invalid="ignore", over="ignore"):
        bad = ~np.isfinite(points) | (np.abs(points) > OVERFLOW_RADIUS)
    points[bad] = INF
    return points


def infinite_mask(points: np.ndarray) -> np.ndarray:
    return ~np.isfinite(points)


def to_sphere_xyz(points: np.ndarray) -> np.ndarray:
    """逆球极投影到单位球面，∞ 为北极 (0,0,1)，0 为南极

    单位球面上的欧氏距离恰好等于弦距离。
    """
    points = np.asarray(points, dtype=np.complex128)
    xyz = np.empty(points.shape + (3,), dtype=np.float64)
    inf = infinite_mask(points)
    finite = points[~inf]
    mod2 = finite.real ** 2 + finite.imag ** 2
    denom = 1.0 + mod2
    xyz[~inf, 0] = 2.0 * finite.real / denom
    xyz[~inf, 1] = 2.0 * finite.imag / denom
    xyz[~inf, 2] = (mod2 - 1.0) / denom
    xyz[inf] = (0.0, 0.0, 1.0)
    return xyz


def chordal_dist_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """逐元素弦距离（向量化版本）"""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    a, b = np.broadcast_arrays(a, b)
    out = np.empty(a.shape, dtype=np.float64)
    ia, ib = infinite_mask(a), infinite_mask(b)

    both = ia & ib
    out[both] = 0.0
    only_a = ia & ~ib
    out[only_a] = 2.0 / np.sqrt(1.0 + np.abs(b[only_a]) ** 2)
    only_b = ib & ~ia
    out[only_b] = 2.0 / np.sqrt(1.0 + np.abs(a[only_b]) ** 2)

    fin = ~(ia | ib)
    fa, fb = a[fin], b[fin]
    out[fin] = 2.0 * np.abs(fa - fb) / np.sqrt((1.0 + np.abs(fa) ** 2) * (1.0 + np.abs(fb) ** 2))
    return np.minimum(out, 2.0)
