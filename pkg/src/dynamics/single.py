"""
单个多项式的动力学

- Green 函数（以 ∞ 为极点）: 逃逸速率 G(z) = lim k⁻ⁿ log|pⁿ(z)|
- 外 Böttcher 坐标 φ: φ∘p = φ^k，|φ| = e^G
- 排斥不动点 / 周期点种子
- 逆迭代生成 Julia 集点云
"""

import math
import time
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..core.exceptions import DomainError, NonRepellingError, ValidationError
from ..core.logger import get_logger
from ..poly.polynomial import PointLike, Polynomial
from ..poly.roots import horner
from ..sphere.point import SpherePoint, infinite_mask
from .cloud import CloudKind, Purpose, SetApprox, expand, parent_limit, stream, thin

INFINITY_SENTINEL = 1e308
DEFAULT_MAX_ITER = 512
TAIL_RADIUS = 1e20
REPELLING_MARGIN = 1e-9


@dataclass(frozen=True)
class GreenEstimate:
    """Green 函数估计值；未逃逸时 value 恒为 0"""
    value: float
    iterations: int
    escaped: bool


@dataclass(frozen=True)
class BottcherValue:
    """外 Böttcher 坐标，branch 为所取的 a^{1/(k−1)}"""
    value: complex
    functional_residual: float
    branch: complex


def _leading_root(p: Polynomial) -> complex:
    """首项系数的 (k−1) 次方根，取主值分支"""
    return complex(np.exp(np.log(complex(p.leading)) / (p.degree - 1)))


def green_array(p: Polynomial, points: np.ndarray, max_iter: int = DEFAULT_MAX_ITER) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    向量化 Green 函数

    在 max_iter 步内越过逃逸半径的点继续迭代到 |zₙ| ≥ max(R, 1e20)，
    再取 G = (log|zₙ| + log|a_k|/(k−1)) / kⁿ，其余尾项小于 1e−20 量级。

    Returns:
        (values, iterations, escaped) 三个等长数组
    """
    p.require_generator()
    points = np.asarray(points, dtype=np.complex128).ravel()
    n = len(points)
    k = p.degree
    radius = p.escape_radius()
    big = max(radius, TAIL_RADIUS)
    log_lead = math.log(abs(p.leading)) / (k - 1)

    values = np.zeros(n, dtype=np.float64)
    iterations = np.zeros(n, dtype=np.int64)
    inf = infinite_mask(points)
    escaped = inf.copy()
    values[inf] = INFINITY_SENTINEL

    z = points.copy()
    active = ~inf
    escaped |= active & (np.abs(z) >= radius)

    hard_cap = max_iter + 4096
    while active.any():
        idx = np.flatnonzero(active)
        mod = np.abs(z[idx])
        esc = escaped[idx]
        stop = (esc & (mod >= big)) | (~esc & (iterations[idx] >= max_iter)) | (iterations[idx] >= hard_cap)

        moving = idx[~stop]
        nxt = p.eval_array(z[moving])
        overflow = infinite_mask(nxt)
        # 下一步溢出时停在当前迭代，尚未越过半径的点视为已逃逸
        escaped[moving[overflow]] = True

        grow = moving[~overflow]
        z[grow] = nxt[~overflow]
        iterations[grow] += 1
        escaped[grow] |= (np.abs(z[grow]) >= radius) & (iterations[grow] <= max_iter)

        active[idx[stop]] = False
        active[moving[overflow]] = False

    done = escaped & ~inf
    if done.any():
        scale = np.power(float(k), iterations[done].astype(np.float64))
        values[done] = np.maximum((np.log(np.abs(z[done])) + log_lead) / scale, 0.0)
    return values, iterations, escaped


def green_value(p: Polynomial, z: PointLike, max_iter: int = DEFAULT_MAX_ITER) -> GreenEstimate:
    """单点 Green 函数；G(∞) 记为哨兵值 1e308"""
    z = SpherePoint.from_complex(z)
    values, iterations, escaped = green_array(p, np.array([z.to_complex()]), max_iter)
    return GreenEstimate(value=float(values[0]), iterations=int(iterations[0]), escaped=bool(escaped[0]))


def _bottcher_raw(p: Polynomial, z: complex, beta: complex) -> complex:
    k = p.degree
    # p(z)/(a·z^k) 写成 1/z 的多项式，避免 z^k 溢出
    reversed_normalized = p.array[::-1] / p.leading
    total = 0j
    current = z
    weight = 1.0 / k
    with np.errstate(all="ignore"):
        while abs(current) < TAIL_RADIUS and weight > 1e-300:
            ratio = complex(horner(reversed_normalized, np.array([1.0 / current]))[0])
            total += weight * complex(np.log(ratio))
            current = complex(p.eval_array(np.array([current]))[0])
            if not np.isfinite(current):
                break
            weight /= k
    return beta * z * complex(np.exp(total))


def bottcher_value(p: Polynomial, z: PointLike, radius: Optional[float] = None) -> BottcherValue:
    """
    外 Böttcher 坐标 φ(z) = β·z·∏ₙ (p(zₙ)/(a·zₙ^k))^{1/k^{n+1}}，β^{k−1} = a

    Args:
        radius: 定义域半径，缺省为逃逸半径；|z| 必须严格大于它

    Raises:
        DomainError: z 不在逃逸区域内
    """
    p.require_generator()
    z = SpherePoint.from_complex(z)
    limit = p.escape_radius() if radius is None else float(radius)
    if z.infinite or abs(z) <= limit:
        raise DomainError(
            f"Böttcher 坐标只在 {limit} < |z| < ∞ 上计算, 实际 |z| = {abs(z)}",
            operation="bottcher_value",
        )

    beta = _leading_root(p)
    w = z.to_complex()
    phi = _bottcher_raw(p, w, beta)

    image = p.eval(w)
    if image.infinite:
        residual = 0.0
    else:
        phi_image = _bottcher_raw(p, image.to_complex(), beta)
        with np.errstate(all="ignore"):
            log_ratio = np.log(phi_image) - p.degree * np.log(phi)
            residual = float(abs(np.exp(log_ratio) - 1.0))
    return BottcherValue(value=phi, functional_residual=residual, branch=beta)


def _multipliers(p: Polynomial, points: np.ndarray, period: int) -> np.ndarray:
    """周期轨道乘子 |∏ p′(pⁱ(z))|"""
    product = np.ones(len(points), dtype=np.complex128)
    current = points.copy()
    for _ in range(period):
        product *= p.derivative_array(current)
        current = p.eval_array(current)
    return np.abs(product)


def seed_repelling_point(p: Polynomial) -> SpherePoint:
    """
    在 p(z) − z 的根中选乘子最大的排斥不动点

    Raises:
        NonRepellingError: 所有有限不动点都不排斥，此时应改用 seed_repelling_cycle
    """
    p.require_generator()
    fixed = p.shifted(linear=1.0).preimages_array(np.array([0j]))[0]
    mult = _multipliers(p, fixed, 1)
    best = int(np.argmax(mult))
    if not mult[best] > 1.0 + REPELLING_MARGIN:
        raise NonRepellingError(
            "没有排斥不动点, 请改用 p(p(z)) − z 的排斥 2-周期点作为种子",
            multipliers=[float(m) for m in mult],
        )
    return SpherePoint.from_complex(fixed[best])


def seed_repelling_cycle(p: Polynomial, period: int = 2) -> SpherePoint:
    """在 pᵖ(z) − z 的根中选真周期为 period 的排斥周期点"""
    p.require_generator()
    if period < 1:
        raise ValidationError(f"周期必须 ≥ 1: {period}", field_name="period")
    candidates = p.iterate(period).shifted(linear=1.0).preimages_array(np.array([0j]))[0]
    if period > 1:
        separation = np.abs(p.eval_array(candidates) - candidates)
        candidates = candidates[separation > 1e-8 * p.coefficient_scale()]
    mult = _multipliers(p, candidates, period)
    if mult.size == 0 or not mult.max() > 1.0 + REPELLING_MARGIN:
        raise NonRepellingError(
            f"没有周期为 {period} 的排斥周期点",
            multipliers=[float(m) for m in mult],
        )
    return SpherePoint.from_complex(candidates[int(np.argmax(mult))])


def natural_depth(degree: int, budget: int) -> int:
    """使 k^d ≥ budget 的最小深度"""
    depth = 0
    while degree ** depth < budget:
        depth += 1
    return depth


def julia_cloud_single(p: Polynomial,
                       depth: Optional[int] = None,
                       budget: int = 4096,
                       seed: int = 42,
                       start: Optional[PointLike] = None,
                       workers: int = 1) -> SetApprox:
    """
    逆迭代 Julia 点云：从排斥种子出发逐层取全部原像，父点超过 ⌈budget/k⌉ 时先均匀抽稀

    返回最后一层前沿；depth 缺省为 natural_depth(k, budget)。
    """
    p.require_generator()
    if budget < 1:
        raise ValidationError(f"budget 必须 ≥ 1: {budget}", field_name="budget")
    if depth is None:
        depth = natural_depth(p.degree, budget)
    if depth < 0:
        raise ValidationError(f"depth 必须 ≥ 0: {depth}", field_name="depth")

    kind = CloudKind.SINGLE_JULIA
    logger = get_logger()
    seed_point = seed_repelling_point(p) if start is None else SpherePoint.from_complex(start)
    frontier = np.array([seed_point.to_complex()])
    limit = parent_limit(budget, p.degree)
    sizes = [1]

    def backward(chunk: np.ndarray) -> np.ndarray:
        return p.preimages_array(chunk)

    for level in range(1, depth + 1):
        started = time.time()
        parents = thin(frontier, limit, stream(seed, kind, level, Purpose.THIN))
        frontier = expand(parents, backward, workers)
        sizes.append(len(frontier))
        logger.log_layer(kind.value, level, len(frontier), time.time() - started)

    frontier = thin(frontier, budget, stream(seed, kind, depth, Purpose.FINAL))
    return SetApprox(frontier, depth=depth, budget=budget, seed=seed, kind=kind, layer_sizes=tuple(sizes))
