"""
点云几何诊断与 Julia 集相等性比较

弦距离的计算统一通过逆球极投影到单位球面后的欧氏距离完成，用 scipy cKDTree 做最近邻查询。
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from ..core.exceptions import ValidationError
from ..core.logger import get_logger
from ..poly.polynomial import Polynomial
from ..sphere.point import SpherePoint, to_sphere_xyz
from .cloud import SetApprox
from .semigroup import Direction, letter_map
from .single import DEFAULT_MAX_ITER, green_array, julia_cloud_single

MAX_CHORDAL = 2.0
RESOLUTION_FACTOR = 2.0


def _as_points(cloud) -> np.ndarray:
    if isinstance(cloud, SetApprox):
        return cloud.points
    return np.asarray(cloud, dtype=np.complex128).ravel()


def nearest_distances(source, target) -> np.ndarray:
    """source 中每个点到 target 的最近弦距离"""
    src = _as_points(source)
    dst = _as_points(target)
    if len(src) == 0:
        return np.empty(0, dtype=np.float64)
    if len(dst) == 0:
        return np.full(len(src), MAX_CHORDAL)
    distances, _ = cKDTree(to_sphere_xyz(dst)).query(to_sphere_xyz(src), k=1)
    return np.minimum(distances, MAX_CHORDAL)


def hausdorff_distance(a, b) -> float:
    """双向弦 Hausdorff 距离；一侧为空时取 2"""
    pa, pb = _as_points(a), _as_points(b)
    if len(pa) == 0 and len(pb) == 0:
        return 0.0
    if len(pa) == 0 or len(pb) == 0:
        return MAX_CHORDAL
    return float(max(nearest_distances(pa, pb).max(), nearest_distances(pb, pa).max()))


def invariance_defect(cloud, p: Polynomial, direction: Direction) -> float:
    """点云在 p 的正像（或全原像）下离开自身的最大弦距离"""
    points = _as_points(cloud)
    if len(points) == 0:
        return 0.0
    images = np.asarray(letter_map(p, Direction(direction))(points)).ravel()
    return float(nearest_distances(images, points).max())


def isolation_radius(cloud) -> float:
    """每个点到最近的另一个点的距离的最大值；重合点互为近邻"""
    points = _as_points(cloud)
    if len(points) < 2:
        raise ValidationError("孤立半径至少需要两个点", field_name="cloud")
    distances, _ = cKDTree(to_sphere_xyz(points)).query(to_sphere_xyz(points), k=2)
    return float(distances[:, 1].max())


def _sampling_resolution(points: np.ndarray) -> float:
    return isolation_radius(points) if len(points) >= 2 else 0.0


class Verdict(str, Enum):
    EQUAL = "equal"
    DISTINCT = "distinct"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CompareResult:
    """
    比较结果

    witness 取自 witness_source（"f" 或 "g"）的 Julia 点云，
    witness_green 是它在另一个映射下的 Green 值。
    """
    verdict: Verdict
    witness: Optional[SpherePoint]
    witness_green: float
    witness_source: Optional[str]
    green_strength: float
    hausdorff: float
    resolution: float
    tol: float
    samples: int


def julia_compare(f: Polynomial,
                  g: Polynomial,
                  samples: int = 4096,
                  tol: float = 1e-3,
                  seed: int = 42,
                  max_iter: int = DEFAULT_MAX_ITER,
                  workers: int = 1) -> CompareResult:
    """
    判断 J_f 与 J_g 是否相等

    J_f ≠ J_g 时必有 J_g 中的点在 f 下逃逸（或反之），其 Green 值即见证强度 w。
    只有 w > 3·tol 才判为不同。w ≤ tol 且 Hausdorff 距离不超过 tol 加上采样分辨率
    （两片点云孤立半径较大者）的 RESOLUTION_FACTOR 倍时判为相同，其余一律不确定。
    Hausdorff 距离只在相同与不确定之间做选择。
    """
    f.require_generator()
    g.require_generator()
    if samples < 1:
        raise ValidationError(f"samples 必须 ≥ 1: {samples}", field_name="samples")
    if not tol > 0:
        raise ValidationError(f"tol 必须为正数: {tol}", field_name="tol")

    cloud_f = julia_cloud_single(f, budget=samples, seed=seed, workers=workers).points
    cloud_g = julia_cloud_single(g, budget=samples, seed=seed, workers=workers).points

    green_g_under_f, _, _ = green_array(f, cloud_g, max_iter)
    green_f_under_g, _, _ = green_array(g, cloud_f, max_iter)
    to_f = nearest_distances(cloud_g, cloud_f)
    to_g = nearest_distances(cloud_f, cloud_g)
    hausdorff = float(max(to_f.max(), to_g.max()))

    i_g, i_f = int(np.argmax(green_g_under_f)), int(np.argmax(green_f_under_g))
    if green_g_under_f[i_g] >= green_f_under_g[i_f]:
        strength, green_pick = float(green_g_under_f[i_g]), (cloud_g[i_g], "g", float(green_g_under_f[i_g]))
    else:
        strength, green_pick = float(green_f_under_g[i_f]), (cloud_f[i_f], "f", float(green_f_under_g[i_f]))

    if to_f.max() >= to_g.max():
        j = int(np.argmax(to_f))
        far_pick = (cloud_g[j], "g", float(green_g_under_f[j]))
    else:
        j = int(np.argmax(to_g))
        far_pick = (cloud_f[j], "f", float(green_f_under_g[j]))

    resolution = max(_sampling_resolution(cloud_f), _sampling_resolution(cloud_g))
    if strength > 3.0 * tol:
        verdict = Verdict.DISTINCT
    elif strength <= tol and hausdorff <= tol + RESOLUTION_FACTOR * resolution:
        verdict = Verdict.EQUAL
    else:
        verdict = Verdict.INCONCLUSIVE

    pick = green_pick if strength > tol else far_pick
    if verdict is Verdict.EQUAL:
        witness, source, witness_green = None, None, 0.0
    else:
        witness = SpherePoint.from_complex(pick[0])
        source, witness_green = pick[1], pick[2]

    result = CompareResult(
        verdict=verdict,
        witness=witness,
        witness_green=witness_green,
        witness_source=source,
        green_strength=strength,
        hausdorff=hausdorff,
        resolution=resolution,
        tol=tol,
        samples=samples,
    )
    get_logger().info("Julia 集比较完成", {
        "verdict": verdict.value, "green_strength": strength, "hausdorff": hausdorff, "resolution": resolution,
    })
    return result
