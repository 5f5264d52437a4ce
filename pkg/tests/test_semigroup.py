"""
半群字轨道、完全不变集与覆盖率实验测试
"""

import numpy as np
import pytest

from src.core.exceptions import ValidationError
from src.dynamics import (
    CloudKind,
    Direction,
    Letter,
    SemigroupSpec,
    SetApprox,
    SignedWord,
    apply_letter,
    apply_word,
    approx_E,
    approx_J_semigroup,
    coverage_experiment,
    isolation_radius,
    julia_cloud_single,
    reverse_word,
)
from src.dynamics.cloud import LayerReservoir, strata_of, stratified_select, thin_stratified
from src.dynamics.compare import nearest_distances
from src.poly import parse_poly
from src.sphere import SphereGrid

EXAMPLE_ONE = ["z^2", "z^4"]
EXAMPLE_TWO = ["z^2", "z^2/3"]


def _cloud(points, budget=16):
    return SetApprox(np.asarray(points, dtype=np.complex128), depth=0, budget=budget, seed=0,
                     kind=CloudKind.INVARIANT_E)


class TestWords:
    """带方向的字测试"""

    def test_reverse_empty(self):
        """测试空字"""
        assert reverse_word(SignedWord()) == SignedWord()

    def test_reverse_single(self):
        """测试单字母翻转方向"""
        word = SignedWord.from_pairs([(0, "forward")])
        assert reverse_word(word) == SignedWord.from_pairs([(0, "backward")])

    def test_reverse_order_and_flip(self):
        """测试倒序并翻转"""
        word = SignedWord.from_pairs([(0, "forward"), (1, "backward")])
        assert reverse_word(word) == SignedWord.from_pairs([(1, "forward"), (0, "backward")])

    def test_reverse_is_involution(self):
        """测试两次反转回到原字"""
        word = SignedWord.from_pairs([(0, "forward"), (1, "backward"), (1, "forward")])
        assert reverse_word(reverse_word(word)) == word

    def test_validate(self):
        """测试生成元编号越界"""
        with pytest.raises(ValidationError):
            SignedWord.from_pairs([(2, "forward")]).validate(2)
        with pytest.raises(ValidationError):
            Letter(-1, Direction.FORWARD)


class TestSemigroupSpec:
    """生成元集合测试"""

    def test_from_strings(self):
        """测试解析生成元"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        assert len(spec) == 2
        assert spec.generators[1].degree == 2

    def test_rejects_empty_and_linear(self):
        """测试空集合与一次生成元"""
        with pytest.raises(ValidationError):
            SemigroupSpec(())
        with pytest.raises(ValidationError):
            SemigroupSpec.from_strings(["z^2", "3*z + 1"])

    def test_branching(self):
        """测试每个父点的子点数"""
        spec = SemigroupSpec.from_strings(["z^2", "z^3"])
        both = spec.letters([Direction.BACKWARD, Direction.FORWARD])
        assert spec.branching(both) == 2 + 1 + 3 + 1


class TestApplyLetter:
    """单字母作用测试"""

    def test_forward_preserves_circle(self):
        """测试单位圆在 z² 下不变"""
        angles = np.linspace(0, 2 * np.pi, 12, endpoint=False)
        image = apply_letter(_cloud(np.exp(1j * angles)), parse_poly("z^2"), Direction.FORWARD)
        assert np.all(np.abs(np.abs(image.points) - 1.0) <= 1e-12)
        assert image.depth == 1

    def test_backward_square_root(self):
        """测试 {4} 在 z² 下的全原像"""
        image = apply_letter(_cloud([4.0]), parse_poly("z^2"), Direction.BACKWARD)
        assert sorted(image.points.real.tolist()) == [-2.0, 2.0]

    def test_forward_scaled(self):
        """测试 {9} 在 z²/3 下的像"""
        image = apply_letter(_cloud([9.0]), parse_poly("z^2/3"), "forward")
        assert image.points[0] == pytest.approx(27.0)

    def test_thinned_to_budget(self):
        """测试原像数超过预算时抽稀"""
        cloud = _cloud(np.arange(1, 9, dtype=float), budget=8)
        image = apply_letter(cloud, parse_poly("z^3"), Direction.BACKWARD)
        assert len(image) == 8

    def test_apply_word(self):
        """测试按顺序作用整个字"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        word = SignedWord.from_pairs([(1, "forward"), (0, "backward")])
        image = apply_word(_cloud([9.0]), spec, word)
        # 9 → 27 → ±√27
        np.testing.assert_allclose(np.sort(np.abs(image.points)), [np.sqrt(27.0)] * 2)

    def test_apply_word_out_of_range(self):
        """测试字中的编号越界"""
        spec = SemigroupSpec.from_strings(["z^2"])
        with pytest.raises(ValidationError):
            apply_word(_cloud([1.0]), spec, SignedWord.from_pairs([(1, "forward")]))


class TestSemigroupJulia:
    """J(G) 点云测试"""

    def test_annulus(self):
        """测试 ⟨z², z²/3⟩ 的点云落在环 1 ≤ |z| ≤ 3 内"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        cloud = approx_J_semigroup(spec, depth=6, budget=2000, seed=42)
        modulus = np.abs(cloud.points)
        assert cloud.kind is CloudKind.SEMIGROUP_JULIA
        assert len(cloud) <= 2000
        assert np.all((modulus >= 1 - 1e-6) & (modulus <= 3 + 1e-6))
        # 两个边界圆之间也有点
        assert np.any((modulus > 1.1) & (modulus < 2.9))

    def test_common_julia_set(self):
        """测试 ⟨z², z⁴⟩ 的点云在单位圆上"""
        spec = SemigroupSpec.from_strings(EXAMPLE_ONE)
        cloud = approx_J_semigroup(spec, depth=5, budget=1000, seed=42)
        assert np.all(np.abs(np.abs(cloud.points) - 1.0) <= 1e-8)

    def test_single_generator(self):
        """测试单生成元退化为 J_f"""
        spec = SemigroupSpec.from_strings(["z^2"])
        cloud = approx_J_semigroup(spec, depth=3, budget=300, seed=1)
        assert np.all(np.abs(np.abs(cloud.points) - 1.0) <= 1e-9)

    def test_layer_callback(self):
        """测试逐层回调"""
        seen = []
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        approx_J_semigroup(spec, depth=3, budget=200, seed=0, on_layer=lambda level, layer: seen.append(level))
        assert seen == [0, 1, 2, 3]

    def test_invalid_arguments(self):
        """测试非法深度与预算"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        with pytest.raises(ValidationError):
            approx_J_semigroup(spec, depth=-1, budget=10, seed=0)
        with pytest.raises(ValidationError):
            approx_J_semigroup(spec, depth=1, budget=0, seed=0)

    def test_backward_layers_map_into_previous_layer(self):
        """测试 𝓕ₙ₊₁ 的每个点在某个生成元下映回 𝓕ₙ"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        layers = {}
        approx_J_semigroup(spec, depth=4, budget=2000, seed=3,
                           on_layer=lambda level, layer: layers.__setitem__(level, layer.copy()))
        for level in range(1, 5):
            gaps = np.min([nearest_distances(g.eval_array(layers[level]), layers[level - 1])
                           for g in spec.generators], axis=0)
            assert gaps.max() <= 1e-6

    @pytest.mark.slow
    def test_annulus_is_filled(self):
        """测试 ⟨z², z²/3⟩ 在深度 16 时 log|z| 铺满 [0, log 3]"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        cloud = approx_J_semigroup(spec, depth=16, budget=100_000, seed=42)
        log_modulus = np.log(np.abs(cloud.points))
        assert np.all((log_modulus >= -1e-6) & (log_modulus <= np.log(3.0) + 1e-6))
        for target in np.linspace(0.0, np.log(3.0), 50):
            assert np.min(np.abs(log_modulus - target)) <= 0.02

    @pytest.mark.slow
    def test_generator_julia_sets_inside(self):
        """测试各生成元的 Julia 点云都在 J(G) 点云 0.02 以内"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        cloud = approx_J_semigroup(spec, depth=8, budget=100_000, seed=42)
        for g in spec.generators:
            single = julia_cloud_single(g, budget=4096, seed=7)
            assert nearest_distances(single, cloud).max() <= 0.02


class TestInvariantSet:
    """E(G) 点云测试"""

    def test_common_julia_set(self):
        """测试 ⟨z², z⁴⟩ 的 E 在单位圆上"""
        spec = SemigroupSpec.from_strings(EXAMPLE_ONE)
        cloud = approx_E(spec, depth=5, budget=1000, seed=42)
        assert cloud.kind is CloudKind.INVARIANT_E
        assert np.all(np.abs(np.abs(cloud.points) - 1.0) <= 1e-8)

    def test_infinity_reached(self):
        """测试 ⟨z², z²/3⟩ 的正向字把点推向 ∞"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        cloud = approx_E(spec, depth=12, budget=20_000, seed=42)
        assert np.any(np.abs(cloud.points) > 1e6)

    def test_depth_zero_is_seed_union(self):
        """测试深度 0 恰为各生成元 Julia 点云之并"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        cloud = approx_E(spec, depth=0, budget=512, seed=9)
        seeds = np.concatenate([
            julia_cloud_single(g, budget=256, seed=9).points for g in spec.generators
        ])
        np.testing.assert_array_equal(np.sort(cloud.points), np.sort(seeds))

    def test_determinism(self):
        """测试同参数同结果，且与线程数无关"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        serial = approx_E(spec, depth=2, budget=30_000, seed=5, workers=1)
        again = approx_E(spec, depth=2, budget=30_000, seed=5, workers=1)
        threaded = approx_E(spec, depth=2, budget=30_000, seed=5, workers=3)
        np.testing.assert_array_equal(serial.points, again.points)
        np.testing.assert_array_equal(serial.points, threaded.points)

    def test_custom_seed_budget(self):
        """测试自定义种子层预算"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        cloud = approx_E(spec, depth=1, budget=400, seed=0, seed_budget=16)
        assert cloud.layer_sizes[0] == 32

    @pytest.mark.slow
    def test_semigroup_julia_inside_invariant_set(self):
        """测试 J(G) 点云在 E 点云 0.02 以内"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        julia = approx_J_semigroup(spec, depth=12, budget=100_000, seed=42)
        invariant = approx_E(spec, depth=12, budget=100_000, seed=42)
        assert nearest_distances(julia, invariant).max() <= 0.02

    @pytest.mark.slow
    def test_invariant_set_has_no_isolated_points(self):
        """测试 E 点云每个点在 0.05 内都有近邻"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        for depth in (10, 12, 16):
            cloud = approx_E(spec, depth=depth, budget=100_000, seed=42)
            assert isolation_radius(cloud) <= 0.05

    @pytest.mark.slow
    def test_infinity_class_by_depth_twelve(self):
        """测试预算 10⁶ 时深度 12 的 E 含有溢出为 ∞ 的点"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        cloud = approx_E(spec, depth=12, budget=1_000_000, seed=42)
        assert cloud.infinite_count() > 0


class TestCoverage:
    """覆盖率实验测试"""

    def test_curve_monotone(self):
        """测试覆盖率随深度单调不减"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        result = coverage_experiment(spec, grid_cells=512, depth=6, budget=3000, seed=1)
        fractions = [f for _, f in result.curve]
        assert [d for d, _ in result.curve] == list(range(7))
        assert all(b >= a for a, b in zip(fractions, fractions[1:]))
        assert result.final_fraction == fractions[-1]

    def test_depth_zero_matches_seed_clouds(self):
        """测试深度 0 的覆盖率只来自种子点云"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        result = coverage_experiment(spec, grid_cells=2048, depth=0, budget=1000, seed=4)
        seeds = np.concatenate([
            julia_cloud_single(g, budget=500, seed=4).points for g in spec.generators
        ])
        expected = SphereGrid(2048).add(seeds).coverage_fraction()
        assert result.curve == [(0, expected)]

    def test_common_julia_set_stays_thin(self):
        """测试 ⟨z², z⁴⟩ 只覆盖赤道附近的格子"""
        spec = SemigroupSpec.from_strings(EXAMPLE_ONE)
        result = coverage_experiment(spec, grid_cells=2048, depth=6, budget=4000, seed=42)
        assert all(f <= 0.10 for _, f in result.curve)

    @pytest.mark.slow
    def test_invariant_set_fills_sphere(self):
        """测试 ⟨z², z²/3⟩ 的 E 最终覆盖几乎整个球面"""
        spec = SemigroupSpec.from_strings(EXAMPLE_TWO)
        result = coverage_experiment(spec, grid_cells=2048, depth=24, budget=1_000_000, seed=42)
        fractions = [f for _, f in result.curve]
        assert all(b >= a for a, b in zip(fractions, fractions[1:]))
        assert result.final_fraction >= 0.95


class TestStratifiedSelection:
    """按球面分层抽稀测试"""

    def test_small_input_kept(self):
        """测试点数不超过上限时全部保留"""
        points = np.array([0.5, 1j, 3.0])
        np.testing.assert_array_equal(stratified_select(points, np.array([0.3, 0.1, 0.2]), 5), [0, 1, 2])
        rng = np.random.default_rng(0)
        np.testing.assert_array_equal(thin_stratified(points, 3, rng), points)

    def test_exact_size_and_order(self):
        """测试恰好选出 limit 个不重复的下标且升序"""
        rng = np.random.default_rng(1)
        points = rng.normal(size=5000) + 1j * rng.normal(size=5000)
        keep = stratified_select(points, rng.random(5000), 700)
        assert len(keep) == 700
        assert np.all(np.diff(keep) > 0)

    def test_sparse_points_survive(self):
        """测试稀疏区域的点不会被密集簇挤掉"""
        rng = np.random.default_rng(2)
        cluster = 0.5 + 1e-4 * (rng.random(1000) + 1j * rng.random(1000))
        scattered = 3.0 * np.exp(2j * np.pi * np.arange(10) / 10)
        points = np.concatenate([cluster, scattered])
        keep = stratified_select(points, rng.random(len(points)), 100)
        assert len(keep) == 100
        assert set(range(1000, 1010)) <= set(keep.tolist())

    def test_magnitude_bands_near_infinity(self):
        """测试 ∞ 附近按 log log|z| 分层，∞ 自成一层"""
        strata = strata_of(np.array([1e3, 1e6, 1e12, complex(np.inf, 0)]), 100)
        assert len(set(strata.tolist())) == 4
        assert strata.min() >= 100

        rng = np.random.default_rng(3)
        huge = np.array([1e3, 1e6, 1e12, 1e24, 1e48, complex(np.inf, 0)])
        points = np.concatenate([huge, 1.0 + 1e-3 * rng.random(1000)])
        keep = stratified_select(points, rng.random(len(points)), 50)
        assert set(range(6)) <= set(keep.tolist())

    def test_reservoir_respects_budget(self):
        """测试蓄水池按分层保留预算内的点，且输出按随机键排序"""
        reservoir = LayerReservoir(100)
        rng = np.random.default_rng(4)
        reservoir.add(0.5 + 1e-4 * rng.random(500), rng)
        reservoir.add(np.array([3.0, -3.0, 3j]), rng)
        points = reservoir.points()
        assert len(points) == 100
        assert {3.0, -3.0, 3j} <= set(points.tolist())
