"""
多项式值类型

系数按高次在前存储；生成元要求次数 ≥ 2，一般多项式只要求次数 ≥ 1。
所有数组运算对 ∞ 与溢出做截断，结果中不会出现 NaN。
"""

from dataclasses import dataclass, field
from typing import Iterable, Tuple, Union

import numpy as np

from ..core.exceptions import DomainError, ValidationError
from ..sphere.point import INF, SpherePoint, chordal_dist, clamp_points, infinite_mask
from .roots import cluster_roots, coefficient_scale, horner, solve_rows

CLUSTER_RTOL = 1e-8

PointLike = Union[SpherePoint, complex, float]


@dataclass(frozen=True)
class PreimageSet:
    """p(z) = w 的全部解，按重数聚类"""
    clusters: Tuple[Tuple[SpherePoint, int], ...]
    residual: float

    @property
    def cardinality(self) -> int:
        return sum(m for _, m in self.clusters)

    @property
    def points(self) -> Tuple[SpherePoint, ...]:
        """按重数展开的多重集"""
        return tuple(p for p, m in self.clusters for _ in range(m))

    def distinct(self) -> Tuple[SpherePoint, ...]:
        return tuple(p for p, _ in self.clusters)

    def contains(self, z: PointLike, tol: float = 1e-8) -> bool:
        """z 是否在弦距离 tol 内属于该原像集"""
        return any(chordal_dist(p, z) <= tol for p, _ in self.clusters)


@dataclass(frozen=True)
class Polynomial:
    """复系数多项式"""
    coeffs: Tuple[complex, ...]
    _array: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        values = np.asarray(list(self.coeffs), dtype=np.complex128).ravel()
        if values.size == 0 or not np.all(np.isfinite(values)):
            raise ValidationError("多项式系数必须是有限复数", field_name="coeffs")
        nonzero = np.flatnonzero(values)
        if nonzero.size == 0:
            raise ValidationError("零多项式不是合法的多项式", field_name="coeffs")
        values = values[nonzero[0]:]
        if values.size < 2:
            raise ValidationError("多项式次数必须 ≥ 1", field_name="coeffs")
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in values))
        values.setflags(write=False)
        object.__setattr__(self, "_array", values)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[complex]) -> "Polynomial":
        return cls(tuple(coeffs))

    @property
    def array(self) -> np.ndarray:
        return self._array

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return self.coeffs[0]

    def require_generator(self) -> "Polynomial":
        """生成元要求次数 ≥ 2"""
        if self.degree < 2:
            raise ValidationError(f"生成元次数必须 ≥ 2: {self.format()}", field_name="generators")
        return self

    def coefficient_scale(self) -> float:
        """容差使用的系数尺度 max(1, max|a_i|)"""
        return coefficient_scale(self._array)

    def eval(self, z: PointLike) -> SpherePoint:
        """Horner 求值，p(∞) = ∞"""
        z = SpherePoint.from_complex(z)
        return SpherePoint.from_complex(self.eval_array(np.array([z.to_complex()]))[0])

    def __call__(self, z: PointLike) -> SpherePoint:
        return self.eval(z)

    def eval_array(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.complex128)
        out = np.full(points.shape, INF, dtype=np.complex128)
        finite = ~infinite_mask(points)
        with np.errstate(all="ignore"):
            out[finite] = horner(self._array, points[finite])
        return clamp_points(out)

    def derivative_array(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.complex128)
        deriv = np.polyder(self._array)
        out = np.full(points.shape, INF, dtype=np.complex128)
        finite = ~infinite_mask(points)
        with np.errstate(all="ignore"):
            out[finite] = horner(deriv, points[finite])
        return clamp_points(out)

    def derivative(self) -> "Polynomial":
        if self.degree < 2:
            raise DomainError("一次多项式的导数是常数", operation="derivative")
        return Polynomial(tuple(np.polyder(self._array)))

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """(self ∘ inner)(z) = self(inner(z))"""
        result = np.array([self._array[0]])
        for a in self._array[1:]:
            result = np.polyadd(np.polymul(result, inner.array), [a])
        return Polynomial(tuple(result))

    def iterate(self, n: int) -> "Polynomial":
        """n 次迭代 pⁿ"""
        if n < 1:
            raise ValidationError(f"迭代次数必须 ≥ 1: {n}", field_name="n")
        result = self
        for _ in range(n - 1):
            result = self.compose(result)
        return result

    def shifted(self, linear: complex = 0.0, constant: complex = 0.0) -> "Polynomial":
        """p(z) − linear·z − constant，用于不动点与周期点方程"""
        values = self._array.copy()
        values[-1] -= constant
        if self.degree >= 1:
            values[-2] -= linear
        return Polynomial(tuple(values))

    def preimages(self, w: PointLike) -> PreimageSet:
        """p(z) − w 的全部根；p⁻¹(∞) = {∞ 重数 k}"""
        w = SpherePoint.from_complex(w)
        batch = solve_rows(self._array, np.array([w.to_complex()]))
        radius = CLUSTER_RTOL * self.coefficient_scale()
        clusters = tuple(
            (SpherePoint.from_complex(z), m) for z, m in cluster_roots(batch.roots[0], radius)
        )
        return PreimageSet(clusters=clusters, residual=float(batch.residuals[0]))

    def preimages_array(self, targets: np.ndarray) -> np.ndarray:
        """批量原像，返回 (n, k) 数组，第 i 行为 targets[i] 的 k 个原像"""
        return solve_rows(self._array, targets).roots

    def escape_radius(self) -> float:
        """R = max(1, (2 + Σ_{i<k}|a_i|)/|a_k|)，保证 |z| ≥ R ⟹ |p(z)| ≥ 2|z|"""
        if self.degree < 2:
            raise DomainError("逃逸半径只对次数 ≥ 2 的多项式有意义", operation="escape_radius")
        tail = float(np.sum(np.abs(self._array[1:])))
        return max(1.0, (2.0 + tail) / abs(self.leading))

    def format(self) -> str:
        from .parser import format_poly
        return format_poly(self)

    def __str__(self) -> str:
        return self.format()
