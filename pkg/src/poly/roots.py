"""
批量求根：对一组目标值 w 同时求 p(z) − w 的全部根

一般多项式使用向量化的 Aberth–Ehrlich 同时迭代，初值取在 Fujiwara 界的圆上并带固定扰动；
二项式 a·z^k + b 与二次多项式走闭式解。迭代失败的行退回到 numpy 伴随矩阵求根，
仍然失败则抛出携带最佳残差的 ConvergenceError。
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..core.exceptions import ConvergenceError
from ..sphere.point import INF, clamp_points

MAX_ITER = 200
RESIDUAL_RTOL = 1e-10
_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class RootBatch:
    """一批目标值的根与残差"""
    roots: np.ndarray      # (n, k)
    residuals: np.ndarray  # (n,)


def coefficient_scale(coeffs: np.ndarray) -> float:
    return float(max(1.0, np.max(np.abs(coeffs))))


def residual_tolerance(coeffs: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """逐行残差容限 1e−10 · max(1, |w|, 系数尺度)"""
    return RESIDUAL_RTOL * np.maximum(coefficient_scale(coeffs), np.abs(targets))


def horner(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """逐元素 Horner 求值，coeffs 为高次在前"""
    value = np.full(z.shape, coeffs[0], dtype=np.complex128)
    for a in coeffs[1:]:
        value = value * z + a
    return value


def _residuals(coeffs: np.ndarray, roots: np.ndarray, targets: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        r = np.abs(horner(coeffs, roots) - targets[:, None])
    r[~np.isfinite(r)] = np.inf
    return r.max(axis=1) if roots.shape[1] else np.zeros(len(targets))


def _is_binomial(coeffs: np.ndarray) -> bool:
    return len(coeffs) > 2 and not np.any(coeffs[1:-1])


def _binomial_roots(coeffs: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """a·z^k + b = w 的闭式解"""
    k = len(coeffs) - 1
    rhs = (targets - coeffs[-1]) / coeffs[0]
    if k == 2:
        s = np.sqrt(rhs)
        return np.stack([s, -s], axis=1)
    base = np.abs(rhs) ** (1.0 / k) * np.exp(1j * np.angle(rhs) / k)
    unity = np.exp(2j * np.pi * np.arange(k) / k)
    return base[:, None] * unity[None, :]


def _quadratic_roots(coeffs: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """数值稳定的二次公式"""
    a, b, c0 = coeffs
    c = c0 - targets
    disc = np.sqrt(b * b - 4.0 * a * c)
    # 选符号使 b 与 disc 同向，避免相消
    sign = np.where((np.conj(b) * disc).real >= 0, 1.0, -1.0)
    q = -0.5 * (b + sign * disc)
    first = q / a
    with np.errstate(all="ignore"):
        second = np.where(q != 0, c / q, first)
    return np.stack([first, second], axis=1)


def _initial_guesses(coeffs: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Fujiwara 界圆上的扰动初值；扰动只依赖次数，保证逐行结果与批次划分无关"""
    k = len(coeffs) - 1
    lead = np.abs(coeffs[0])
    ratios = [np.full(len(targets), np.abs(coeffs[i]) / lead) ** (1.0 / i) for i in range(1, k)]
    ratios.append((np.abs(coeffs[-1] - targets) / (2.0 * lead)) ** (1.0 / k))
    bound = 2.0 * np.max(np.stack(ratios, axis=0), axis=0)
    radius = np.maximum(0.5 * bound, 1e-12)

    rng = np.random.default_rng(k)
    angles = 2.0 * np.pi * np.arange(k) / k + 0.4 + rng.uniform(-0.1, 0.1, size=k)
    scales = 1.0 + rng.uniform(-0.05, 0.05, size=k)
    return radius[:, None] * scales[None, :] * np.exp(1j * angles)[None, :]


def aberth(coeffs: np.ndarray, targets: np.ndarray, max_iter: int = MAX_ITER) -> np.ndarray:
    """向量化 Aberth–Ehrlich 迭代，每行一个目标值"""
    k = len(coeffs) - 1
    deriv = np.polyder(coeffs)
    z = _initial_guesses(coeffs, targets)
    active = np.ones(len(targets), dtype=bool)
    diag = np.arange(k)

    with np.errstate(all="ignore"):
        for _ in range(max_iter):
            idx = np.flatnonzero(active)
            if idx.size == 0:
                break
            za = z[idx]
            p = horner(coeffs, za) - targets[idx, None]
            dp = horner(deriv, za)

            diff = za[:, :, None] - za[:, None, :]
            diff[:, diag, diag] = 1.0
            inv = 1.0 / diff
            inv[:, diag, diag] = 0.0
            delta = p / (dp - p * inv.sum(axis=2))
            delta[~np.isfinite(delta)] = 0.0

            za = za - delta
            z[idx] = za
            done = np.all(np.abs(delta) <= 4.0 * _EPS * (1.0 + np.abs(za)), axis=1)
            active[idx[done]] = False

    return z


def _newton_polish(coeffs: np.ndarray, roots: np.ndarray, targets: np.ndarray, steps: int = 2) -> np.ndarray:
    """逐根牛顿修正，只接受降低残差的步"""
    deriv = np.polyder(coeffs)
    with np.errstate(all="ignore"):
        for _ in range(steps):
            p = horner(coeffs, roots) - targets[:, None]
            dp = horner(deriv, roots)
            candidate = roots - p / dp
            better = np.isfinite(candidate) & (
                np.abs(horner(coeffs, candidate) - targets[:, None]) < np.abs(p)
            )
            roots = np.where(better, candidate, roots)
    return roots


def _companion_rows(coeffs: np.ndarray, targets: np.ndarray) -> np.ndarray:
    rows = []
    for w in targets:
        shifted = coeffs.copy()
        shifted[-1] -= w
        rows.append(np.roots(shifted))
    return np.asarray(rows, dtype=np.complex128).reshape(len(targets), len(coeffs) - 1)


def solve_rows(coeffs: np.ndarray, targets: np.ndarray, max_iter: int = MAX_ITER) -> RootBatch:
    """
    对每个目标值 w 求 p(z) − w 的全部根（按重数）

    Args:
        coeffs: 系数，高次在前，首项非零
        targets: 目标值，∞ 的原像全部为 ∞

    Raises:
        ConvergenceError: 退回伴随矩阵后残差仍超出容限
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    targets = np.asarray(targets, dtype=np.complex128).ravel()
    k = len(coeffs) - 1
    n = len(targets)

    roots = np.full((n, k), INF, dtype=np.complex128)
    residuals = np.zeros(n, dtype=np.float64)
    finite = np.isfinite(targets)
    if not finite.any() or k == 0:
        return RootBatch(roots, residuals)

    w = targets[finite]
    if k == 1:
        sol = ((w - coeffs[1]) / coeffs[0])[:, None]
    elif _is_binomial(coeffs):
        sol = _binomial_roots(coeffs, w)
    elif k == 2:
        sol = _quadratic_roots(coeffs, w)
    else:
        sol = aberth(coeffs, w, max_iter)

    sol = _newton_polish(coeffs, sol, w)
    res = _residuals(coeffs, sol, w)
    tol = residual_tolerance(coeffs, w)

    failed = np.flatnonzero(~(res <= tol))
    if failed.size:
        retry = _newton_polish(coeffs, _companion_rows(coeffs, w[failed]), w[failed])
        retry_res = _residuals(coeffs, retry, w[failed])
        better = retry_res < res[failed]
        sol[failed[better]] = retry[better]
        res[failed[better]] = retry_res[better]
        still = ~(res[failed] <= tol[failed])
        if still.any():
            worst = failed[still]
            raise ConvergenceError(
                f"{worst.size} 个目标值的求根未收敛",
                best_residual=float(np.min(res[worst])),
                context={"degree": k, "max_iter": max_iter, "target": complex(w[worst[0]])},
            )

    roots[finite] = clamp_points(sol)
    residuals[finite] = res
    return RootBatch(roots, residuals)


def cluster_roots(roots: np.ndarray, radius: float) -> Tuple[Tuple[complex, int], ...]:
    """把距离小于 radius 的根并成一个带重数的点"""
    clusters = []
    for z in roots:
        for entry in clusters:
            rep, members = entry
            if np.isinf(z) and np.isinf(rep):
                members.append(z)
                break
            if np.isfinite(z) and np.isfinite(rep) and abs(z - rep) < radius:
                members.append(z)
                break
        else:
            clusters.append((z, [z]))

    out = []
    for rep, members in clusters:
        center = INF if np.isinf(rep) else complex(np.mean(members))
        out.append((center, len(members)))
    return tuple(out)
