"""
对数坐标下的直线动力学（精确有理数运算）

在对数半径坐标 r = log|z| 中，z ↦ z^j 变为 t(r) = j·r，
z ↦ a·z^m（|a| < 1）变为 s(r) = m·r + c，c = log|a| < 0。
s 的不动点 r₀ = −c/(m−1) > 0；交换子
    t⁻ⁿ∘s⁻ⁿ∘tⁿ∘sⁿ(r) = r − r₀ + dₙ,   dₙ = r₀(mⁿ + jⁿ − 1)/(mⁿ jⁿ)
是平移，反向交换子平移 r₀ − dₙ。密度推进利用这两个平移
说明不变半径集在 (−∞, log r* − r₀] 中稠密。
"""

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Dict, List, Optional, Tuple, Union

from ..core.exceptions import GuardViolation, ValidationError

RationalLike = Union[int, Fraction, str]


def as_fraction(value: RationalLike, field_name: str = "value") -> Fraction:
    """把整数、Fraction 或 "p/q" 字符串转换为 Fraction；浮点数会被拒绝"""
    if isinstance(value, bool) or isinstance(value, float):
        raise ValidationError(f"{field_name} 必须是精确有理数, 实际为 {value!r}", field_name=field_name)
    try:
        if isinstance(value, (Rational, str)):
            return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise ValidationError(f"{field_name} 无法解析为有理数: {value!r} ({e})", field_name=field_name)
    raise ValidationError(f"{field_name} 必须是精确有理数, 实际为 {value!r}", field_name=field_name)


@dataclass(frozen=True)
class LogDynParams:
    """t(r) = j·r, s(r) = m·r + c 的参数；rstar_log 是区间 I = [−∞, log r*) 的右端点"""
    j: int
    m: int
    c: Fraction
    rstar_log: Fraction

    def __post_init__(self):
        for name in ("j", "m"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 2:
                raise ValidationError(f"{name} 必须是 ≥ 2 的整数, 实际为 {value!r}", field_name=name)
        object.__setattr__(self, "c", as_fraction(self.c, "c"))
        object.__setattr__(self, "rstar_log", as_fraction(self.rstar_log, "rstar_log"))
        if self.c >= 0:
            raise ValidationError(f"c 必须 < 0, 实际为 {self.c}", field_name="c")
        if self.rstar_log >= 0:
            raise ValidationError(f"rstar_log 必须 < 0, 实际为 {self.rstar_log}", field_name="rstar_log")

    @classmethod
    def from_r0(cls, j: int, m: int, r0: RationalLike, rstar_log: RationalLike) -> "LogDynParams":
        r0 = as_fraction(r0, "r0")
        return cls(j=j, m=m, c=-r0 * (m - 1), rstar_log=rstar_log)

    @property
    def r0(self) -> Fraction:
        return -self.c / (self.m - 1)

    def to_dict(self) -> Dict[str, object]:
        return {"j": self.j, "m": self.m, "c": self.c, "r0": self.r0, "rstar_log": self.rstar_log}


class LineLetter(str, Enum):
    S = "s"
    T = "t"
    S_INV = "s_inv"
    T_INV = "t_inv"

    @property
    def inverse(self) -> "LineLetter":
        return {
            LineLetter.S: LineLetter.S_INV,
            LineLetter.S_INV: LineLetter.S,
            LineLetter.T: LineLetter.T_INV,
            LineLetter.T_INV: LineLetter.T,
        }[self]


_FACTOR_RE = re.compile(r"\s*([st])(?:_inv)?\s*(?:\^\s*\{?\s*(-?\d+)\s*\}?)?\s*")


@dataclass(frozen=True)
class LineWord:
    """
    直线映射的字：steps 为 (字母, 重复次数)，按作用顺序排列（steps[0] 最先作用）
    """
    steps: Tuple[Tuple[LineLetter, int], ...] = ()

    def __post_init__(self):
        normalized = []
        for letter, count in self.steps:
            if not isinstance(count, int) or count < 0:
                raise ValidationError(f"重复次数必须是非负整数: {count!r}", field_name="steps")
            if count:
                normalized.append((LineLetter(letter), count))
        object.__setattr__(self, "steps", tuple(normalized))

    @classmethod
    def commutator(cls, n: int) -> "LineWord":
        """t⁻ⁿ∘s⁻ⁿ∘tⁿ∘sⁿ"""
        return cls(((LineLetter.S, n), (LineLetter.T, n), (LineLetter.S_INV, n), (LineLetter.T_INV, n)))

    @classmethod
    def reversed_commutator(cls, n: int) -> "LineWord":
        """s⁻ⁿ∘t⁻ⁿ∘sⁿ∘tⁿ，交换子的逆"""
        return cls(((LineLetter.T, n), (LineLetter.S, n), (LineLetter.T_INV, n), (LineLetter.S_INV, n)))

    @classmethod
    def from_composition(cls, text: str) -> "LineWord":
        """
        解析复合写法，如 "t^-2 s^-2 t^2 s^2" 或 "s_inv t"；最左边的因子最后作用
        """
        factors = []
        pos = 0
        stripped = text.replace("∘", " ").replace("*", " ")
        while pos < len(stripped):
            match = _FACTOR_RE.match(stripped, pos)
            if match is None or match.end() == pos:
                raise ValidationError(f"无法解析的复合写法 {text!r} (位置 {pos})", field_name="word")
            base = LineLetter(match.group(1))
            exponent = int(match.group(2)) if match.group(2) else 1
            if "_inv" in match.group(0):
                exponent = -exponent
            letter = base if exponent >= 0 else base.inverse
            factors.append((letter, abs(exponent)))
            pos = match.end()
        if not factors:
            raise ValidationError("空的复合写法", field_name="word")
        return cls(tuple(reversed(factors)))

    def inverse(self) -> "LineWord":
        return LineWord(tuple((letter.inverse, count) for letter, count in reversed(self.steps)))

    def __len__(self) -> int:
        return sum(count for _, count in self.steps)

    def to_text(self) -> str:
        """复合写法，最左边最后作用"""
        parts = []
        for letter, count in reversed(self.steps):
            base = letter.value[0]
            exponent = -count if letter in (LineLetter.S_INV, LineLetter.T_INV) else count
            parts.append(base if exponent == 1 else f"{base}^{exponent}")
        return " ".join(parts)


def _step(params: LogDynParams, letter: LineLetter, r: Fraction) -> Fraction:
    if letter is LineLetter.T:
        return params.j * r
    if letter is LineLetter.T_INV:
        return r / params.j
    if letter is LineLetter.S:
        return params.m * r + params.c
    return (r - params.c) / params.m


def line_apply(params: LogDynParams, word: LineWord, r: RationalLike, guard: bool = False) -> Fraction:
    """
    逐字母精确求值

    Args:
        guard: 为 True 时要求每个中间点都落在 I = [−∞, log r*) 内

    Raises:
        GuardViolation: 某一步的结果 ≥ rstar_log，step 为从 1 开始的字母序号
    """
    value = as_fraction(r, "r")
    step = 0
    if guard and value >= params.rstar_log:
        raise GuardViolation(f"起点 {value} 不在 I 内", step=0, context={"value": str(value)})
    for letter, count in word.steps:
        for _ in range(count):
            value = _step(params, letter, value)
            step += 1
            if guard and value >= params.rstar_log:
                raise GuardViolation(
                    f"第 {step} 步 ({letter.value}) 得到 {value} ≥ log r* = {params.rstar_log}",
                    step=step,
                    context={"letter": letter.value, "value": str(value)},
                )
    return value


def s_power(params: LogDynParams, n: int, r: RationalLike) -> Fraction:
    """sⁿ(r) = r₀ + mⁿ(r − r₀)，n 可为任意整数"""
    r = as_fraction(r, "r")
    return params.r0 + Fraction(params.m) ** n * (r - params.r0)


def t_power(params: LogDynParams, n: int, r: RationalLike) -> Fraction:
    """tⁿ(r) = jⁿ·r，n 可为任意整数"""
    return Fraction(params.j) ** n * as_fraction(r, "r")


def d_n_value(params: LogDynParams, n: int) -> Fraction:
    """dₙ = r₀(mⁿ + jⁿ − 1)/(mⁿ jⁿ)，满足 0 < dₙ ≤ r₀ 且严格递减"""
    if n < 1:
        raise ValidationError(f"n 必须 ≥ 1: {n}", field_name="n")
    mn, jn = params.m ** n, params.j ** n
    return params.r0 * Fraction(mn + jn - 1, mn * jn)


def commutator_value(params: LogDynParams, n: int, r: RationalLike) -> Fraction:
    """t⁻ⁿ∘s⁻ⁿ∘tⁿ∘sⁿ(r) = r − r₀ + dₙ"""
    return as_fraction(r, "r") - params.r0 + d_n_value(params, n)


def reversed_commutator_value(params: LogDynParams, n: int, r: RationalLike) -> Fraction:
    """s⁻ⁿ∘t⁻ⁿ∘sⁿ∘tⁿ(r) = r + r₀ − dₙ"""
    return as_fraction(r, "r") + params.r0 - d_n_value(params, n)


@dataclass(frozen=True)
class DensityMarch:
    """
    密度推进的结果

    first_generation[n−1]  = rₙ′ = r′ − r₀ + dₙ（显式交换子字求得）
    second_generation      = {(n, k): rₙ′ + r₀ − d_k}（显式反向交换子字求得）
    limit_points           = r′ − r₀ 与各 rₙ′ + r₀ = r′ + dₙ（由闭性加入）
    """
    params: LogDynParams
    r_prime: Fraction
    n_max: int
    first_generation: Tuple[Fraction, ...]
    second_generation: Dict[Tuple[int, int], Fraction]
    limit_points: Tuple[Fraction, ...]
    guarded_steps: int

    @property
    def guard_ok(self) -> bool:
        """全部点都严格落在 log r* 之下"""
        return all(p < self.params.rstar_log for p in self.points)

    @property
    def points(self) -> Tuple[Fraction, ...]:
        """全部点（含 r′ 本身），升序去重"""
        values = {self.r_prime, *self.first_generation, *self.second_generation.values(), *self.limit_points}
        return tuple(sorted(values))

    def gap_above(self, x: Optional[Fraction] = None) -> Fraction:
        """x（缺省为 r′）到其上方最近点的距离"""
        x = self.r_prime if x is None else as_fraction(x, "x")
        above = [p for p in self.points if p > x]
        if not above:
            raise ValidationError(f"{x} 上方没有点", field_name="x")
        return above[0] - x

    def gap_below(self, x: Optional[Fraction] = None) -> Fraction:
        x = self.r_prime if x is None else as_fraction(x, "x")
        below = [p for p in self.points if p < x]
        if not below:
            raise ValidationError(f"{x} 下方没有点", field_name="x")
        return x - below[-1]


def density_march(params: LogDynParams, r_prime: RationalLike, n_max: int) -> DensityMarch:
    """
    重放稠密性论证中的构造序列

    每个点都由显式字在守卫模式下逐字母求值得到，并与闭式逐一核对；
    守卫或核对失败都抛出 GuardViolation。

    Raises:
        ValidationError: r′ ≥ log r* − r₀ 或 n_max < 1
    """
    r_prime = as_fraction(r_prime, "r_prime")
    if n_max < 1:
        raise ValidationError(f"n_max 必须 ≥ 1: {n_max}", field_name="n_max")
    if not r_prime < params.rstar_log - params.r0:
        raise ValidationError(
            f"r′ = {r_prime} 必须 < log r* − r₀ = {params.rstar_log - params.r0}",
            field_name="r_prime",
        )

    guarded = 0
    first: List[Fraction] = []
    for n in range(1, n_max + 1):
        word = LineWord.commutator(n)
        value = line_apply(params, word, r_prime, guard=True)
        guarded += len(word)
        expected = commutator_value(params, n, r_prime)
        if value != expected:
            raise GuardViolation(f"交换子闭式不成立: n={n}, {value} ≠ {expected}", step=n)
        first.append(value)

    second: Dict[Tuple[int, int], Fraction] = {}
    for n, r_n in enumerate(first, start=1):
        for k in range(1, n_max + 1):
            word = LineWord.reversed_commutator(k)
            value = line_apply(params, word, r_n, guard=True)
            guarded += len(word)
            expected = reversed_commutator_value(params, k, r_n)
            if value != expected:
                raise GuardViolation(f"反向交换子闭式不成立: n={n}, k={k}", step=k)
            second[(n, k)] = value

    limits = (r_prime - params.r0,) + tuple(r_n + params.r0 for r_n in first)
    return DensityMarch(
        params=params,
        r_prime=r_prime,
        n_max=n_max,
        first_generation=tuple(first),
        second_generation=second,
        limit_points=limits,
        guarded_steps=guarded,
    )
