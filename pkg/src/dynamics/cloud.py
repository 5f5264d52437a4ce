"""
点云基础设施

- SetApprox: 带来源信息（深度、预算、种子、类型）的有限点云
- 随机流: 由 (seed, 点云类型, 深度, 用途) 派生 numpy SeedSequence，结果与调度无关
- 均匀抽稀、按球面格子分层抽稀与跨层蓄水池合并
- 分块并行扩展: 块大小固定，按块顺序拼接，输出与线程数无关
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from functools import lru_cache
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..sphere.grid import SphereGrid
from ..sphere.point import SpherePoint, infinite_mask

CHUNK_SIZE = 4096
POINTS_PER_STRATUM = 2
MAX_BAND = 63


class CloudKind(str, Enum):
    """点云类型"""
    SINGLE_JULIA = "single-julia"
    SEMIGROUP_JULIA = "semigroup-julia"
    INVARIANT_E = "invariant-E"

    @property
    def tag(self) -> int:
        return list(CloudKind).index(self)


class Purpose(IntEnum):
    """随机流用途"""
    THIN = 0
    RESERVOIR = 1
    LETTER = 2
    FINAL = 3


def stream(seed: int, kind: CloudKind, depth: int, purpose: Purpose) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), kind.tag, int(depth), int(purpose)]))


@dataclass(eq=False)
class SetApprox:
    """有限点云；点以 complex128 数组保存，∞ 记为 complex(inf, 0)"""
    points: np.ndarray
    depth: int
    budget: int
    seed: int
    kind: CloudKind
    layer_sizes: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=np.complex128).ravel()
        if len(self.points) > self.budget:
            raise ValueError(f"点数 {len(self.points)} 超过预算 {self.budget}")

    def __len__(self) -> int:
        return len(self.points)

    def sphere_points(self) -> List[SpherePoint]:
        return [SpherePoint.from_complex(z) for z in self.points]

    def infinite_count(self) -> int:
        return int(np.count_nonzero(infinite_mask(self.points)))

    def finite_points(self) -> np.ndarray:
        return self.points[~infinite_mask(self.points)]

    def modulus_range(self) -> Tuple[float, float]:
        """有限点的模长范围；没有有限点时返回 (0, 0)"""
        finite = self.finite_points()
        if finite.size == 0:
            return 0.0, 0.0
        mod = np.abs(finite)
        return float(mod.min()), float(mod.max())

    def summary(self) -> dict:
        lo, hi = self.modulus_range()
        return {
            "kind": self.kind.value,
            "size": len(self),
            "depth": self.depth,
            "budget": self.budget,
            "seed": self.seed,
            "infinite_points": self.infinite_count(),
            "min_modulus": lo,
            "max_modulus": hi,
            "layer_sizes": list(self.layer_sizes),
        }


def thin(points: np.ndarray, limit: int, rng: np.random.Generator) -> np.ndarray:
    """均匀随机抽稀到 limit 个点，保持原有顺序"""
    if len(points) <= limit:
        return points
    keep = np.sort(rng.choice(len(points), size=limit, replace=False))
    return points[keep]


@lru_cache(maxsize=8)
def _strata_grid(cell_count: int) -> SphereGrid:
    return SphereGrid(cell_count)


def strata_of(points: np.ndarray, cell_count: int) -> np.ndarray:
    """分层编号：等面积格子；∞ 单独成层；两个极冠再按 log₂ log|z| 分带"""
    points = np.asarray(points, dtype=np.complex128).ravel()
    grid = _strata_grid(cell_count)
    n = grid.cell_count
    strata = grid.cells_of(points)

    inf = infinite_mask(points)
    strata[inf] = n
    with np.errstate(divide="ignore", invalid="ignore"):
        log_mod = np.log(np.abs(points))
    for cap, sign, offset in ((0, 1.0, n + 1), (n - 1, -1.0, n + 2 + MAX_BAND)):
        in_cap = (strata == cap) & ~inf & np.isfinite(log_mod) & (sign * log_mod > 0)
        if n > 1 and in_cap.any():
            band = np.floor(np.log2(sign * log_mod[in_cap]))
            strata[in_cap] = offset + np.clip(band, 0, MAX_BAND).astype(np.int64)
    return strata


def stratified_select(points: np.ndarray, keys: np.ndarray, limit: int) -> np.ndarray:
    """按球面分层选出 limit 个点的下标（升序）

    每层先保留键最小的 q 个点，q 取使总数不超过 limit 的最大值；
    剩余名额给恰好排第 q 位、键最小的点。
    """
    n = len(points)
    if n <= limit:
        return np.arange(n)

    strata = strata_of(points, max(1, limit // POINTS_PER_STRATUM))
    order = np.lexsort((keys, strata))
    _, starts, counts = np.unique(strata[order], return_index=True, return_counts=True)
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n) - np.repeat(starts, counts)

    lo, hi = 0, int(counts.max())
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if int(np.minimum(counts, mid).sum()) <= limit:
            lo = mid
        else:
            hi = mid - 1

    keep = rank < lo
    spare = limit - int(np.count_nonzero(keep))
    if spare > 0:
        boundary = np.flatnonzero(rank == lo)
        boundary = boundary[np.argsort(keys[boundary], kind="stable")[:spare]]
        keep[boundary] = True
    return np.flatnonzero(keep)


def thin_stratified(points: np.ndarray, limit: int, rng: np.random.Generator) -> np.ndarray:
    """分层抽稀到 limit 个点，保持原有顺序"""
    if len(points) <= limit:
        return points
    return points[stratified_select(points, rng.random(len(points)), limit)]


def parent_limit(budget: int, branching: int) -> int:
    return max(1, math.ceil(budget / branching))


def expand(points: np.ndarray, transform: Callable[[np.ndarray], np.ndarray], workers: int = 1) -> np.ndarray:
    """按固定块大小对点集应用变换并按块顺序拼接"""
    if len(points) == 0:
        return np.empty(0, dtype=np.complex128)
    chunks = [points[i:i + CHUNK_SIZE] for i in range(0, len(points), CHUNK_SIZE)]
    if workers <= 1 or len(chunks) == 1:
        results = [transform(chunk) for chunk in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(transform, chunks))
    return np.concatenate([np.asarray(r, dtype=np.complex128).ravel() for r in results])


class LayerReservoir:
    """跨层分层蓄水池：每个点带随机键，按球面分层保留 budget 个"""

    def __init__(self, budget: int):
        self.budget = budget
        self._points = np.empty(0, dtype=np.complex128)
        self._keys = np.empty(0, dtype=np.float64)

    def add(self, points: np.ndarray, rng: np.random.Generator) -> None:
        keys = rng.random(len(points))
        self._points = np.concatenate([self._points, points])
        self._keys = np.concatenate([self._keys, keys])
        if len(self._keys) > self.budget:
            keep = stratified_select(self._points, self._keys, self.budget)
            self._points = self._points[keep]
            self._keys = self._keys[keep]

    def points(self) -> np.ndarray:
        order = np.argsort(self._keys, kind="stable")
        return self._points[order]


LayerCallback = Optional[Callable[[int, np.ndarray], None]]
