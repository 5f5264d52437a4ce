"""
圆周与单项式刚性检查

- circle_lemma_check: 半径 ρ < 1 的圆弧（角宽 δ）在 z ↦ z^{jⁿ} 下覆盖整个圆 C(0, ρ^{jⁿ})，
  n 取使 jⁿδ > 2π 的最小正整数
- monomial_rigidity_check: 把小圆映成以原点为心的圆的多项式 L(z)（L(0) = 0）必须是单项式 a·z^j
- monomial_pair_julia_radius: z ↦ a·z^l 的 Julia 圆半径 |a|^{−1/(l−1)}
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import DomainError, ValidationError
from ..poly.polynomial import Polynomial

TWO_PI = 2.0 * math.pi
TURN_MARGIN = 1e-12
SPREAD_RTOL = 1e-10
COEFF_ATOL = 1e-12


@dataclass(frozen=True)
class CircleReport:
    """圆弧展开检查结果"""
    j: int
    n: int
    radius: float
    theta: float
    delta: float
    samples: int
    image_log_radius: float
    relative_error: float
    max_angular_gap: float
    gap_bound: float
    covers_circle: bool


def minimal_turns(j: int, delta: float) -> int:
    """使 jⁿ·δ > 2π 的最小 n ≥ 1（2π 处留 1e−12 相对余量）"""
    n = 1
    while j ** n * delta <= TWO_PI * (1.0 + TURN_MARGIN):
        n += 1
    return n


def _power_image(points: np.ndarray, j: int, n: int, log_target: float) -> Tuple[np.ndarray, np.ndarray]:
    """逐次作用 z ↦ z^j，返回像的 (log 模长, 辐角)；模长会下溢时改在对数极坐标中计算"""
    if log_target > -690.0:
        image = points.copy()
        for _ in range(n):
            image = image ** j
        return np.log(np.abs(image)), np.angle(image)
    power = float(j) ** n
    return np.log(np.abs(points)) * power, np.mod(np.angle(points) * power, TWO_PI)


def _max_circular_gap(angles: np.ndarray) -> float:
    ordered = np.sort(np.mod(angles, TWO_PI))
    gaps = np.diff(np.concatenate([ordered, [ordered[0] + TWO_PI]]))
    return float(gaps.max())


def circle_lemma_check(j: int, radius: float, theta: float, delta: float, samples: int = 1024) -> CircleReport:
    """
    在角宽 δ 的圆弧上取 samples 个等距点，检查 z^{jⁿ} 的像

    像的最大角间隙不超过 jⁿ·δ/samples 即视为覆盖整圆；
    像的模长与 ρ^{jⁿ} 的相对误差应在 1e−12 内。
    """
    if not isinstance(j, int) or isinstance(j, bool) or j < 2:
        raise ValidationError(f"j 必须是 ≥ 2 的整数: {j!r}", field_name="j")
    if not 0.0 < radius < 1.0:
        raise ValidationError(f"radius 必须在 (0, 1) 内: {radius}", field_name="radius")
    if not 0.0 < delta <= TWO_PI:
        raise ValidationError(f"delta 必须在 (0, 2π] 内: {delta}", field_name="delta")
    if samples < 2:
        raise ValidationError(f"samples 必须 ≥ 2: {samples}", field_name="samples")

    n = minimal_turns(j, delta)
    power = float(j) ** n
    log_target = power * math.log(radius)

    angles = theta + delta * np.arange(samples) / samples
    arc = radius * np.exp(1j * angles)
    image_log, image_angle = _power_image(arc, j, n, log_target)

    relative_error = float(np.max(np.abs(np.expm1(image_log - log_target))))
    step = power * delta / samples
    max_gap = _max_circular_gap(image_angle)

    return CircleReport(
        j=j,
        n=n,
        radius=radius,
        theta=theta,
        delta=delta,
        samples=samples,
        image_log_radius=log_target,
        relative_error=relative_error,
        max_angular_gap=max_gap,
        gap_bound=step,
        covers_circle=bool(max_gap <= step * (1.0 + 1e-9)),
    )


@dataclass(frozen=True)
class RigidityOutcome:
    """
    单项式刚性检查结果

    consistent 为 True 时 a、j 给出 L = a·z^j；否则 witness_radius 与 modulus_spread
    给出第一个模长不为常数的测试圆。
    """
    consistent: bool
    a: Optional[complex] = None
    j: Optional[int] = None
    witness_radius: Optional[float] = None
    modulus_spread: Optional[float] = None
    spreads: List[float] = field(default_factory=list)


def monomial_rigidity_check(L: Polynomial, radii: Sequence[float], samples: int = 256) -> RigidityOutcome:
    """
    在每个测试圆上测 |L| 的极差；全部极差 ≤ 1e−10·max|L| 且其余系数 ≤ 1e−12 时判为单项式
    """
    coeffs = L.array
    if coeffs[-1] != 0:
        raise ValidationError("L(0) 必须为 0", field_name="L")
    if not radii:
        raise ValidationError("至少需要一个测试半径", field_name="radii")
    for r in radii:
        if not 0.0 < r < 1.0:
            raise ValidationError(f"测试半径必须在 (0, 1) 内: {r}", field_name="radii")
    if samples < 2:
        raise ValidationError(f"samples 必须 ≥ 2: {samples}", field_name="samples")

    unit = np.exp(2j * np.pi * np.arange(samples) / samples)
    spreads = []
    for r in radii:
        modulus = np.abs(L.eval_array(r * unit))
        spread = float(modulus.max() - modulus.min())
        spreads.append(spread)
        if spread > SPREAD_RTOL * float(modulus.max()):
            return RigidityOutcome(consistent=False, witness_radius=float(r), modulus_spread=spread, spreads=spreads)

    # 最低次非零系数即 a，次数即 j
    low_first = coeffs[::-1]
    index = int(np.flatnonzero(low_first)[0])
    others = np.delete(low_first, index)
    if np.any(np.abs(others) > COEFF_ATOL):
        worst = int(np.argmax(spreads))
        return RigidityOutcome(consistent=False, witness_radius=float(radii[worst]),
                               modulus_spread=spreads[worst], spreads=spreads)
    return RigidityOutcome(consistent=True, a=complex(low_first[index]), j=index, spreads=spreads)


def monomial_pair_julia_radius(a: complex, l: int) -> float:
    """z ↦ a·z^l 的 Julia 集是圆 |z| = |a|^{−1/(l−1)}；|a| = 1 时为单位圆"""
    if not isinstance(l, int) or isinstance(l, bool) or l < 2:
        raise ValidationError(f"l 必须是 ≥ 2 的整数: {l!r}", field_name="l")
    if a == 0:
        raise DomainError("a 不能为 0", operation="monomial_pair_julia_radius")
    return abs(a) ** (-1.0 / (l - 1))
