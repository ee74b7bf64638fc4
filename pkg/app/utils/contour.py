"""
双重围道积分工具
在两个同心圆上做等距梯形求积（对圆上的解析周期函数指数收敛），
通过二维FFT一次得到整张Laurent系数网格，并按倍增点数检查收敛。
"""
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from app.core.config import get_settings
from app.core.exceptions import ContourError, ConvergenceError
from app.core.logging import computation_logger, error_logger

settings = get_settings()

Integrand = Callable[[np.ndarray, np.ndarray], np.ndarray]
GridBuilder = Callable[[int], np.ndarray]

# 分块求和时每块的网格单元数
GRID_BLOCK_CELLS = 1 << 22


@dataclass(frozen=True)
class ContourConfig:
    """围道配置：z、w 两个圆的半径与每个圆上的采样点数"""

    r_z: float
    r_w: float
    quad_points: int = settings.quad_points

    def __post_init__(self):
        if self.r_z <= 0 or self.r_w <= 0:
            raise ContourError(f"围道半径必须为正: r_z={self.r_z}, r_w={self.r_w}")
        n = self.quad_points
        if n < 1 or n & (n - 1):
            raise ContourError(f"采样点数必须为2的幂: {n}")

    def check_poles(self, z_poles: Iterable[float] = (), w_poles: Iterable[float] = ()):
        """半径与任一极点模长的距离不得小于 pole_margin"""
        margin = settings.pole_margin
        for name, radius, poles in (("z", self.r_z, z_poles), ("w", self.r_w, w_poles)):
            for pole in poles:
                if abs(radius - pole) < margin:
                    raise ContourError(
                        f"{name} 围道半径 {radius:.6g} 与极点模长 {pole:.6g} 距离小于 {margin}"
                    )


@dataclass(frozen=True)
class ContourResult:
    """积分结果及收敛信息"""

    value: complex
    points: int
    doublings: int
    delta: float


def circle_nodes(radius: float, n: int) -> np.ndarray:
    return radius * np.exp(2j * np.pi * np.arange(n) / n)


def laurent_grid(F: Integrand, contours: ContourConfig, n: int) -> np.ndarray:
    """F 在 n×n 网格上的离散Fourier变换（只读）

    grid[p mod n, q mod n]·r_z^{−p}·r_w^{−q} 近似 F 的 z^p w^q 系数。
    """
    z = circle_nodes(contours.r_z, n)[:, None]
    w = circle_nodes(contours.r_w, n)[None, :]
    values = np.broadcast_to(F(z, w), (n, n))
    if not np.all(np.isfinite(values)):
        raise ContourError("被积函数在围道上出现非有限值，半径可能落在极点上")
    grid = np.fft.fft2(values) / (n * n)
    grid.setflags(write=False)
    return grid


def coefficient_from_grid(grid: np.ndarray, contours: ContourConfig, p: int, q: int) -> complex:
    n = grid.shape[0]
    return complex(grid[p % n, q % n]) * contours.r_z ** (-p) * contours.r_w ** (-q)


def coefficient_by_rows(F: Integrand, contours: ContourConfig, n: int, p: int, q: int) -> complex:
    """不建整张网格，按行分块求 z^p w^q 系数（大采样点数时使用）"""
    block = max(1, GRID_BLOCK_CELLS // n)
    w = circle_nodes(contours.r_w, n)[None, :]
    w_phase = np.exp(-2j * np.pi * q * np.arange(n) / n)[None, :]
    total = 0j
    for start in range(0, n, block):
        k = np.arange(start, min(start + block, n))
        z = (contours.r_z * np.exp(2j * np.pi * k / n))[:, None]
        values = np.broadcast_to(F(z, w), (len(k), n))
        if not np.all(np.isfinite(values)):
            raise ContourError("被积函数在围道上出现非有限值，半径可能落在极点上")
        z_phase = np.exp(-2j * np.pi * p * k / n)[:, None]
        total += complex(np.sum(values * z_phase * w_phase))
    return total / (n * n) * contours.r_z ** (-p) * contours.r_w ** (-q)


def max_quad_points(start: int) -> int:
    """倍增的上限：start·2^quad_max_doublings 与 quad_max_points 中较小者"""
    return min(start * 2**settings.quad_max_doublings, settings.quad_max_points)


def _refine(evaluate: Callable[[int], complex], start: int, tol: float) -> ContourResult:
    n = start
    limit = max_quad_points(start)
    previous = evaluate(n)
    doubling = 0
    while n < limit:
        n *= 2
        doubling += 1
        current = evaluate(n)
        delta = abs(current - previous)
        if delta <= tol * max(1.0, abs(current)):
            computation_logger.log_quadrature(n, doubling, delta)
            return ContourResult(current, n, doubling, delta)
        previous = current
    exc = ConvergenceError(f"围道积分在 {n} 个采样点内未收敛")
    error_logger.log_numeric_error("contour_refine", exc, points=n)
    raise exc


def laurent_coefficient(
    F: Integrand,
    contours: ContourConfig,
    p: int,
    q: int,
    tol: Optional[float] = None,
    build_grid: Optional[GridBuilder] = None,
) -> ContourResult:
    """z^p w^q 系数，倍增采样点直到相邻两次结果的相对差小于 tol

    采样点数不超过 quad_grid_points 时用整张FFT网格（build_grid 可由调用方缓存），
    更大时按行分块直接求和。
    """
    tol = settings.quad_tolerance if tol is None else tol
    build_grid = build_grid or (lambda n: laurent_grid(F, contours, n))
    start = contours.quad_points
    # 保证 p、q 不在最初的网格上发生混叠
    while start <= 4 * max(abs(p), abs(q)):
        start *= 2

    def evaluate(n: int) -> complex:
        if n > settings.quad_grid_points:
            return coefficient_by_rows(F, contours, n, p, q)
        return coefficient_from_grid(build_grid(n), contours, p, q)

    return _refine(evaluate, start, tol)


def contour_integrate(
    f: Integrand, contours: ContourConfig, tol: Optional[float] = None
) -> ContourResult:
    """(1/(2πi))² ∮∮ f(z,w) dz dw，即 f 的 z⁻¹w⁻¹ 系数"""
    tol = settings.quad_tolerance if tol is None else tol
    return _refine(
        lambda n: coefficient_by_rows(f, contours, n, -1, -1), contours.quad_points, tol
    )
