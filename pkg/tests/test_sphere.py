"""
黎曼球面点与弦距离测试
"""

import math

import numpy as np
import pytest

from src.sphere import (
    INF,
    SpherePoint,
    chordal_dist,
    chordal_dist_array,
    clamp_points,
    infinite_mask,
    to_sphere_xyz,
)


class TestSpherePoint:
    """球面点测试"""

    def test_from_complex(self):
        """测试有限点与无穷远点的构造"""
        p = SpherePoint.from_complex(1 + 2j)
        assert (p.re, p.im, p.infinite) == (1.0, 2.0, False)
        assert SpherePoint.from_complex(complex(math.inf, 0)).infinite
        assert SpherePoint.from_complex(1e200).infinite

    def test_infinity_is_canonical(self):
        """测试 ∞ 只有一种表示"""
        assert SpherePoint(3.0, 4.0, infinite=True) == SpherePoint.infinity()
        assert abs(SpherePoint.infinity()) == math.inf

    def test_non_finite_coordinates_rejected(self):
        """测试有限点坐标必须有限"""
        with pytest.raises(ValueError):
            SpherePoint(math.nan, 0.0)

    def test_reciprocal(self):
        """测试 0 与 ∞ 互换"""
        assert SpherePoint(0.0, 0.0).reciprocal().infinite
        assert SpherePoint.infinity().reciprocal() == SpherePoint(0.0, 0.0)
        assert SpherePoint(2.0, 0.0).reciprocal() == SpherePoint(0.5, 0.0)


class TestChordalDistance:
    """弦距离测试"""

    def test_antipodal_points(self):
        """测试对径点距离为 2"""
        assert chordal_dist(SpherePoint(0.0, 0.0), SpherePoint.infinity()) == pytest.approx(2.0)
        assert chordal_dist(1.0, -1.0) == pytest.approx(2.0)
        assert chordal_dist(1j, -1j) == pytest.approx(2.0)

    def test_identity_and_symmetry(self):
        """测试同一点距离为 0，且距离对称"""
        z, w = 0.3 - 1.2j, -2.0 + 0.5j
        assert chordal_dist(z, z) == 0.0
        assert chordal_dist(z, w) == pytest.approx(chordal_dist(w, z))
        assert chordal_dist(SpherePoint.infinity(), SpherePoint.infinity()) == 0.0

    def test_distance_to_infinity(self):
        """测试到 ∞ 的距离 2/√(1+|z|²)"""
        assert chordal_dist(3.0, SpherePoint.infinity()) == pytest.approx(2.0 / math.sqrt(10.0))

    def test_array_matches_scalar(self):
        """测试向量化版本与标量版本一致"""
        a = np.array([0, 1, 1j, INF, 2 - 1j, INF])
        b = np.array([INF, -1, -1j, INF, 0.5j, 3.0])
        expected = [chordal_dist(x, y) for x, y in zip(a, b)]
        np.testing.assert_allclose(chordal_dist_array(a, b), expected, atol=1e-15)

    def test_embedding_matches_chordal(self):
        """测试逆球极投影下欧氏距离等于弦距离"""
        rng = np.random.default_rng(0)
        a = rng.normal(size=50) + 1j * rng.normal(size=50)
        b = rng.normal(size=50) * 5 + 1j * rng.normal(size=50)
        euclid = np.linalg.norm(to_sphere_xyz(a) - to_sphere_xyz(b), axis=1)
        np.testing.assert_allclose(euclid, chordal_dist_array(a, b), atol=1e-12)

    def test_poles(self):
        """测试 ∞ 在北极、0 在南极"""
        xyz = to_sphere_xyz(np.array([INF, 0j]))
        np.testing.assert_allclose(xyz, [[0, 0, 1], [0, 0, -1]])

    def test_metric_on_random_triples(self):
        """测试随机三元组上的三角不等式与 z ↦ 1/z 不变性"""
        rng = np.random.default_rng(21)
        v = rng.normal(size=(3000, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        points = [SpherePoint.from_complex(z) for z in (v[:, 0] + 1j * v[:, 1]) / (1.0 - v[:, 2])]
        points[:6] = [SpherePoint.infinity(), SpherePoint(0.0, 0.0), SpherePoint(1.0, 0.0)] * 2
        for p, q, r in zip(points[0::3], points[1::3], points[2::3]):
            assert chordal_dist(p, q) <= chordal_dist(p, r) + chordal_dist(r, q) + 1e-12
            assert chordal_dist(p.reciprocal(), q.reciprocal()) == pytest.approx(chordal_dist(p, q), abs=1e-12)


class TestClamping:
    """截断测试"""

    def test_clamp_points(self):
        """测试非有限值与超大模长变为 ∞"""
        points = np.array([1.0, complex(np.nan, 0), 1e151, -2j], dtype=np.complex128)
        clamped = clamp_points(points)
        assert infinite_mask(clamped).tolist() == [False, True, True, False]
        assert not np.any(np.isnan(clamped.real))
