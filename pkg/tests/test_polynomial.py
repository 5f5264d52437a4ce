"""
多项式值类型与批量求根测试
"""

import numpy as np
import pytest

from src.core.exceptions import DomainError, ValidationError
from src.poly import Polynomial, parse_poly, solve_rows
from src.poly.roots import cluster_roots, horner, residual_tolerance
from src.sphere import INF, SpherePoint, chordal_dist_array


def _disc(rng, size, low=0.0, high=1.0):
    """圆环 low ≤ |a| < high 上的面积均匀随机点"""
    moduli = np.sqrt(low ** 2 + (high ** 2 - low ** 2) * rng.random(size))
    return moduli * np.exp(2j * np.pi * rng.random(size))


def _random_polynomial(rng):
    """次数 1..8；首项模长在 [0.1, 1)，其余系数在单位圆盘内均匀分布"""
    degree = int(rng.integers(1, 9))
    coeffs = np.concatenate([_disc(rng, 1, low=0.1), _disc(rng, degree)])
    return Polynomial(tuple(coeffs))


class TestPolynomial:
    """多项式基本运算测试"""

    def test_construction(self):
        """测试构造与首项零去除"""
        p = Polynomial((0, 0, 1, 0, -2))
        assert p.coeffs == (1, 0, -2)
        assert p.degree == 2
        assert p.leading == 1

    @pytest.mark.parametrize("coeffs", [(), (0, 0), (5,), (0, 3), (1, np.nan)])
    def test_invalid(self, coeffs):
        """测试零多项式、常数与非有限系数"""
        with pytest.raises(ValidationError):
            Polynomial(coeffs)

    def test_require_generator(self):
        """测试生成元次数要求"""
        with pytest.raises(ValidationError):
            Polynomial((2, 1)).require_generator()
        assert Polynomial((1, 0, 0)).require_generator().degree == 2

    def test_eval(self):
        """测试求值"""
        assert parse_poly("z^2").eval(3) == SpherePoint(9.0, 0.0)
        assert parse_poly("z^2 - 2")(0) == SpherePoint(-2.0, 0.0)
        assert parse_poly("z^3 + z").eval(SpherePoint.infinity()).infinite

    def test_eval_overflow_clamps(self):
        """测试溢出截断为 ∞ 且没有 NaN"""
        values = parse_poly("z^4").eval_array(np.array([1e100, INF, 2.0]))
        assert np.isinf(values[0].real) and values[0].imag == 0
        assert np.isinf(values[1].real)
        assert values[2] == 16

    def test_compose(self):
        """测试复合"""
        z2 = parse_poly("z^2")
        assert z2.compose(z2) == parse_poly("z^4")
        assert parse_poly("z^2 - 2").compose(parse_poly("z")) == parse_poly("z^2 - 2")
        np.testing.assert_allclose(z2.compose(parse_poly("z^2/3")).array, [1 / 9, 0, 0, 0, 0])

    def test_iterate(self):
        """测试迭代"""
        p = parse_poly("z^2 + 1")
        assert p.iterate(1) == p
        assert p.iterate(2) == p.compose(p)
        with pytest.raises(ValidationError):
            p.iterate(0)

    def test_derivative(self):
        """测试导数"""
        assert parse_poly("z^3 - z").derivative() == parse_poly("3*z^2 - 1")
        with pytest.raises(DomainError):
            parse_poly("2*z + 1").derivative()

    def test_shifted(self):
        """测试不动点方程 p(z) − z"""
        assert parse_poly("z^2").shifted(linear=1) == parse_poly("z^2 - z")

    @pytest.mark.parametrize("text, radius", [("z^2", 2.0), ("z^2 - 2", 4.0), ("z^2/3", 6.0)])
    def test_escape_radius(self, text, radius):
        """测试逃逸半径及 |z| ≥ R ⟹ |p(z)| ≥ 2|z|"""
        p = parse_poly(text)
        assert p.escape_radius() == pytest.approx(radius)
        angles = np.linspace(0, 2 * np.pi, 64, endpoint=False)
        for scale in (1.0, 1.5, 10.0):
            z = radius * scale * np.exp(1j * angles)
            assert np.all(np.abs(p.eval_array(z)) >= 2 * np.abs(z) * (1 - 1e-12))

    def test_escape_radius_linear(self):
        """测试一次多项式没有逃逸半径"""
        with pytest.raises(DomainError):
            parse_poly("3*z").escape_radius()


class TestPreimages:
    """原像测试"""

    def test_square_root(self):
        """测试 z² = 4"""
        pre = parse_poly("z^2").preimages(4)
        assert pre.cardinality == 2
        assert pre.contains(2) and pre.contains(-2)

    def test_double_root(self):
        """测试 z² = 0 的重根"""
        pre = parse_poly("z^2").preimages(0)
        assert pre.clusters == ((SpherePoint(0.0, 0.0), 2),)
        assert pre.points == (SpherePoint(0.0, 0.0), SpherePoint(0.0, 0.0))

    def test_scaled_monomial(self):
        """测试 z²/3 = 3"""
        pre = parse_poly("z^2/3").preimages(3)
        assert pre.contains(3, tol=1e-9) and pre.contains(-3, tol=1e-9)

    def test_infinity(self):
        """测试 ∞ 的原像是 k 重 ∞"""
        pre = parse_poly("z^3 + z").preimages(SpherePoint.infinity())
        assert pre.clusters == ((SpherePoint.infinity(), 3),)

    @pytest.mark.parametrize("text", ["z^3 - 2*z + 1", "z^5 + (0.5 + i)*z^2 - 3", "z^2 + z + 1", "2*z^4 - z"])
    def test_residuals(self, text):
        """测试一般多项式的每个原像都满足 p(z) = w"""
        p = parse_poly(text)
        targets = np.array([0, 1 + 1j, -7.5, 100j])
        roots = p.preimages_array(targets)
        assert roots.shape == (4, p.degree)
        values = p.eval_array(roots)
        tol = 1e-10 * np.maximum(p.coefficient_scale(), np.abs(targets))
        assert np.all(np.abs(values - targets[:, None]) <= tol[:, None] * 10)


class TestSolveRows:
    """批量求根测试"""

    def test_batch_independence(self):
        """测试逐行结果与批次划分无关"""
        coeffs = parse_poly("z^3 - 2*z + 1").array
        targets = np.array([0.5, 2j, -3, 1 + 1j])
        whole = solve_rows(coeffs, targets).roots
        parts = np.vstack([solve_rows(coeffs, targets[i:i + 1]).roots for i in range(4)])
        np.testing.assert_allclose(whole, parts, rtol=0, atol=1e-13)

    def test_infinite_targets(self):
        """测试 ∞ 目标的根全为 ∞"""
        batch = solve_rows(parse_poly("z^3 + 1").array, np.array([INF, 1.0]))
        assert np.all(np.isinf(batch.roots[0].real))
        assert np.all(np.isfinite(batch.roots[1]))

    def test_horner(self):
        """测试 Horner 求值"""
        np.testing.assert_allclose(horner(np.array([1, 0, -2], dtype=complex), np.array([3.0 + 0j])), [7])

    def test_cluster_roots(self):
        """测试聚类"""
        clusters = cluster_roots(np.array([1.0, 1.0 + 1e-12, -1.0, INF, INF]), radius=1e-8)
        assert [m for _, m in clusters] == [2, 1, 2]


class TestRandomPolynomials:
    """随机多项式求根测试"""

    def test_residuals(self):
        """测试 1000 个随机多项式的原像残差都在容限内"""
        rng = np.random.default_rng(12345)
        for _ in range(1000):
            p = _random_polynomial(rng)
            targets = _disc(rng, 4, high=2.0)
            batch = solve_rows(p.array, targets)
            assert batch.roots.shape == (4, p.degree)
            assert np.all(batch.residuals <= residual_tolerance(p.array, targets))

    def test_round_trip(self):
        """测试 10⁴ 个样本 z 都出现在 p⁻¹(p(z)) 中"""
        rng = np.random.default_rng(54321)
        for _ in range(100):
            p = _random_polynomial(rng)
            z = _disc(rng, 100, high=2.0)
            roots = p.preimages_array(p.eval_array(z))
            nearest = chordal_dist_array(roots, z[:, None]).min(axis=1)
            assert nearest.max() <= 1e-6
