"""
多项式半群的字轨道

- 𝓕 型点云（只用逆向字母）逼近 J(G)
- 𝓔 型点云（正逆向字母都用）逼近最小完全不变集 E(G)
- 覆盖率实验: 逐层把 𝓔 的完整扩展层计入等面积球面网格

每一轮先把前沿按球面格子分层抽稀到 ⌈budget/分支数⌉ 个父点，再用所有字母展开每个父点；
各层经分层蓄水池合并成最终点云，稀疏区域与通向 ∞、0 的轨道都保留下来。
"""

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import ValidationError
from ..core.logger import get_logger
from ..poly.parser import parse_poly
from ..poly.polynomial import Polynomial
from ..sphere.grid import SphereGrid
from .cloud import (
    CloudKind,
    LayerCallback,
    LayerReservoir,
    Purpose,
    SetApprox,
    expand,
    parent_limit,
    stream,
    thin,
    thin_stratified,
)
from .single import julia_cloud_single


class Direction(str, Enum):
    FORWARD = "forward"
    BACKWARD = "backward"

    def flip(self) -> "Direction":
        return Direction.BACKWARD if self is Direction.FORWARD else Direction.FORWARD


@dataclass(frozen=True)
class Letter:
    """单个字母: 生成元编号与方向"""
    gen_index: int
    direction: Direction

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))
        if self.gen_index < 0:
            raise ValidationError(f"生成元编号必须 ≥ 0: {self.gen_index}", field_name="gen_index")

    def flipped(self) -> "Letter":
        return Letter(self.gen_index, self.direction.flip())


@dataclass(frozen=True)
class SignedWord:
    """带方向的字，letters[0] 最先作用"""
    letters: Tuple[Letter, ...] = ()

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, str]]) -> "SignedWord":
        return cls(tuple(Letter(i, Direction(d)) for i, d in pairs))

    def validate(self, generator_count: int) -> "SignedWord":
        for position, letter in enumerate(self.letters):
            if letter.gen_index >= generator_count:
                raise ValidationError(
                    f"第 {position} 个字母的生成元编号 {letter.gen_index} 超出范围 (共 {generator_count} 个)",
                    field_name="letters",
                )
        return self

    def __len__(self) -> int:
        return len(self.letters)


def reverse_word(word: SignedWord) -> SignedWord:
    """倒序并翻转每个字母的方向；是对合"""
    return SignedWord(tuple(letter.flipped() for letter in reversed(word.letters)))


@dataclass(frozen=True)
class SemigroupSpec:
    """半群生成元，每个次数 ≥ 2"""
    generators: Tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if not self.generators:
            raise ValidationError("至少需要一个生成元", field_name="generators")
        for g in self.generators:
            g.require_generator()

    @classmethod
    def from_strings(cls, expressions: Sequence[str]) -> "SemigroupSpec":
        return cls(tuple(parse_poly(text) for text in expressions))

    def __len__(self) -> int:
        return len(self.generators)

    def letters(self, directions: Sequence[Direction]) -> List[Letter]:
        return [Letter(i, d) for i in range(len(self.generators)) for d in directions]

    def branching(self, letters: Sequence[Letter]) -> int:
        """一个父点经所有字母展开后的子点数"""
        return sum(
            self.generators[letter.gen_index].degree if letter.direction is Direction.BACKWARD else 1
            for letter in letters
        )


def letter_map(p: Polynomial, direction: Direction):
    if direction is Direction.FORWARD:
        return p.eval_array
    return p.preimages_array


def apply_letter(cloud: SetApprox, p: Polynomial, direction: Direction, workers: int = 1) -> SetApprox:
    """正向取像或逆向取全部原像，再均匀抽稀到点云预算"""
    direction = Direction(direction)
    depth = cloud.depth + 1
    images = expand(cloud.points, letter_map(p, direction), workers)
    images = thin(images, cloud.budget, stream(cloud.seed, cloud.kind, depth, Purpose.LETTER))
    return SetApprox(images, depth=depth, budget=cloud.budget, seed=cloud.seed, kind=cloud.kind,
                     layer_sizes=cloud.layer_sizes + (len(images),))


def apply_word(cloud: SetApprox, spec: SemigroupSpec, word: SignedWord, workers: int = 1) -> SetApprox:
    """按 letters[0], letters[1], ... 的顺序依次作用"""
    word.validate(len(spec))
    for letter in word.letters:
        cloud = apply_letter(cloud, spec.generators[letter.gen_index], letter.direction, workers)
    return cloud


def _seed_layer(spec: SemigroupSpec, seed_budget: int, seed: int, workers: int) -> np.ndarray:
    clouds = [julia_cloud_single(g, budget=seed_budget, seed=seed, workers=workers).points
              for g in spec.generators]
    return np.concatenate(clouds)


def _word_orbit(spec: SemigroupSpec,
                directions: Sequence[Direction],
                kind: CloudKind,
                depth: int,
                budget: int,
                seed: int,
                seed_budget: Optional[int],
                workers: int,
                on_layer: LayerCallback) -> SetApprox:
    if depth < 0:
        raise ValidationError(f"depth 必须 ≥ 0: {depth}", field_name="depth")
    if budget < 1:
        raise ValidationError(f"budget 必须 ≥ 1: {budget}", field_name="budget")

    logger = get_logger()
    letters = spec.letters(directions)
    limit = parent_limit(budget, spec.branching(letters))
    if seed_budget is None:
        seed_budget = max(1, budget // len(spec))

    started = time.time()
    frontier = _seed_layer(spec, seed_budget, seed, workers)
    reservoir = LayerReservoir(budget)
    reservoir.add(frontier, stream(seed, kind, 0, Purpose.RESERVOIR))
    sizes = [len(frontier)]
    if on_layer is not None:
        on_layer(0, frontier)
    logger.log_layer(kind.value, 0, len(frontier), time.time() - started)

    maps = [(letter_map(spec.generators[letter.gen_index], letter.direction)) for letter in letters]
    for level in range(1, depth + 1):
        started = time.time()
        parents = thin_stratified(frontier, limit, stream(seed, kind, level, Purpose.THIN))
        frontier = np.concatenate([expand(parents, f, workers) for f in maps])
        reservoir.add(frontier, stream(seed, kind, level, Purpose.RESERVOIR))
        sizes.append(len(frontier))
        if on_layer is not None:
            on_layer(level, frontier)
        logger.log_layer(kind.value, level, len(frontier), time.time() - started)

    return SetApprox(reservoir.points(), depth=depth, budget=budget, seed=seed, kind=kind,
                     layer_sizes=tuple(sizes))


def approx_J_semigroup(spec: SemigroupSpec,
                       depth: int,
                       budget: int,
                       seed: int,
                       seed_budget: Optional[int] = None,
                       workers: int = 1,
                       on_layer: LayerCallback = None) -> SetApprox:
    """𝓕₀ = 各生成元的 Julia 点云，𝓕ₙ₊₁ = ∪ᵢ fᵢ⁻¹(𝓕ₙ)；返回各层的分层合并"""
    return _word_orbit(spec, [Direction.BACKWARD], CloudKind.SEMIGROUP_JULIA,
                       depth, budget, seed, seed_budget, workers, on_layer)


def approx_E(spec: SemigroupSpec,
             depth: int,
             budget: int,
             seed: int,
             seed_budget: Optional[int] = None,
             workers: int = 1,
             on_layer: LayerCallback = None) -> SetApprox:
    """𝓔ₙ₊₁ = ∪ᵢ (fᵢ⁻¹(𝓔ₙ) ∪ fᵢ(𝓔ₙ))；返回各层的分层合并"""
    return _word_orbit(spec, [Direction.BACKWARD, Direction.FORWARD], CloudKind.INVARIANT_E,
                       depth, budget, seed, seed_budget, workers, on_layer)


@dataclass
class CoverageResult:
    """覆盖率曲线 [(depth, fraction), ...] 与最终点云"""
    curve: List[Tuple[int, float]]
    cloud: SetApprox
    grid: SphereGrid = field(repr=False)

    @property
    def final_fraction(self) -> float:
        return self.curve[-1][1]


def coverage_experiment(spec: SemigroupSpec,
                        grid_cells: int,
                        depth: int,
                        budget: int,
                        seed: int,
                        seed_budget: Optional[int] = None,
                        workers: int = 1) -> CoverageResult:
    """把 𝓔 的每一层完整扩展累计计入新网格；曲线随深度单调不减"""
    grid = SphereGrid(grid_cells)
    curve: List[Tuple[int, float]] = []

    def record(level: int, layer: np.ndarray) -> None:
        grid.add(layer)
        curve.append((level, grid.coverage_fraction()))

    cloud = approx_E(spec, depth, budget, seed, seed_budget=seed_budget, workers=workers, on_layer=record)
    get_logger().info("覆盖率实验完成", {"final_fraction": curve[-1][1], "depth": depth, "cells": grid_cells})
    return CoverageResult(curve=curve, cloud=cloud, grid=grid)
