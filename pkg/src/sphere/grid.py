"""
球面等面积网格

采用带两个极冠的分带等面积划分：北极冠（含 ∞）、若干纬带、南极冠（含 0）。
每个纬带沿经度等分，所有格子的立体角严格相等，格子数可以是任意 N ≥ 1。
"""

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .point import SpherePoint, infinite_mask


@dataclass(frozen=True)
class GridScheme:
    """分带描述：每带格子数与带边界（以 sin²(θ/2) 计，θ 为到 ∞ 的余纬）"""
    zone_counts: tuple
    zone_offsets: tuple
    u_bounds: tuple

    @property
    def cell_count(self) -> int:
        return int(sum(self.zone_counts))

    def describe(self) -> dict:
        return {
            "type": "zonal-equal-area",
            "zones": len(self.zone_counts),
            "zone_counts": list(self.zone_counts),
        }


def _zone_counts(n_cells: int) -> List[int]:
    """按理想纬带宽度 √(4π/N) 划分纬带并带进位取整"""
    if n_cells == 1:
        return [1]
    if n_cells == 2:
        return [1, 1]

    area = 4.0 * math.pi / n_cells
    cap_colat = 2.0 * math.asin(math.sqrt(1.0 / n_cells))
    ideal_angle = math.sqrt(area)
    n_collars = max(1, int(round((math.pi - 2.0 * cap_colat) / ideal_angle)))
    fitted_angle = (math.pi - 2.0 * cap_colat) / n_collars

    counts = []
    carry = 0.0
    for i in range(n_collars):
        top = cap_colat + i * fitted_angle
        bottom = cap_colat + (i + 1) * fitted_angle
        ideal = (math.cos(top) - math.cos(bottom)) / 2.0 * n_cells
        rounded = int(round(ideal + carry))
        carry += ideal - rounded
        counts.append(rounded)

    # 进位误差全部落到最后一带
    counts[-1] = n_cells - 2 - sum(counts[:-1])
    collars = [c for c in counts if c > 0]
    return [1] + collars + [1]


def build_scheme(n_cells: int) -> GridScheme:
    if n_cells < 1:
        raise ValueError(f"格子数必须为正整数: {n_cells}")
    counts = _zone_counts(n_cells)
    offsets = np.concatenate([[0], np.cumsum(counts)[:-1]])
    bounds = np.concatenate([[0], np.cumsum(counts)]) / n_cells
    return GridScheme(
        zone_counts=tuple(int(c) for c in counts),
        zone_offsets=tuple(int(o) for o in offsets),
        u_bounds=tuple(float(b) for b in bounds),
    )


class SphereGrid:
    """等面积球面网格及其命中计数"""

    def __init__(self, cell_count: int = 2048, hit_counts: Optional[np.ndarray] = None):
        self.scheme = build_scheme(cell_count)
        self.cell_count = self.scheme.cell_count
        self._counts = np.asarray(self.scheme.zone_counts, dtype=np.int64)
        self._offsets = np.asarray(self.scheme.zone_offsets, dtype=np.int64)
        self._bounds = np.asarray(self.scheme.u_bounds, dtype=np.float64)
        if hit_counts is None:
            self.hit_counts = np.zeros(self.cell_count, dtype=np.int64)
        else:
            self.hit_counts = np.asarray(hit_counts, dtype=np.int64).copy()
            if self.hit_counts.shape != (self.cell_count,):
                raise ValueError("hit_counts 长度与格子数不一致")

    def cells_of(self, points: np.ndarray) -> np.ndarray:
        """批量计算格子编号"""
        points = np.asarray(points, dtype=np.complex128).ravel()
        inf = infinite_mask(points)
        u = np.zeros(points.shape, dtype=np.float64)
        finite = points[~inf]
        u[~inf] = 1.0 / (1.0 + finite.real ** 2 + finite.imag ** 2)

        zone = np.searchsorted(self._bounds, u, side="right") - 1
        zone = np.clip(zone, 0, len(self._counts) - 1)

        lon = np.zeros(points.shape, dtype=np.float64)
        lon[~inf] = np.mod(np.angle(finite), 2.0 * np.pi)
        per_zone = self._counts[zone]
        within = np.minimum((lon / (2.0 * np.pi) * per_zone).astype(np.int64), per_zone - 1)
        return self._offsets[zone] + within

    def cell_of(self, p: SpherePoint) -> int:
        """单点格子编号；∞ 落在北极冠（编号0），0 落在南极冠（编号 N−1）"""
        p = SpherePoint.from_complex(p)
        return int(self.cells_of(np.array([p.to_complex()]))[0])

    def add(self, points: np.ndarray) -> "SphereGrid":
        """把点云计入命中次数（就地）"""
        cells = self.cells_of(points)
        if cells.size:
            self.hit_counts += np.bincount(cells, minlength=self.cell_count)
        return self

    def merge(self, other: "SphereGrid") -> "SphereGrid":
        """合并两个独立填充的网格，满足结合律与交换律"""
        if other.cell_count != self.cell_count:
            raise ValueError("只能合并格子数相同的网格")
        return SphereGrid(self.cell_count, self.hit_counts + other.hit_counts)

    def coverage_fraction(self) -> float:
        """被命中过的格子比例"""
        return float(np.count_nonzero(self.hit_counts)) / self.cell_count

    def cell_areas(self) -> np.ndarray:
        """每个格子的立体角"""
        zone_area = 4.0 * np.pi * np.diff(self._bounds)
        return np.repeat(zone_area / self._counts, self._counts)
