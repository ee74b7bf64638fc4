"""
随机实例生成工具
为验证套件与测试生成小规模的精确有理数实例，同一种子结果确定。
"""
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from app.core.exceptions import SingularMatrixError
from app.services.abstract_points import (
    P13,
    P14,
    P23,
    P24,
    P1234,
    KernelWitness,
    TensorPoint,
)
from app.services.eynard_mehta import EMSpec, PfEMSpec
from app.services.point_process import Config, GroundSet, LEnsemble, PfLEnsemble, ProbTable
from app.services.symfunc import Specialization
from app.utils.linalg import det, pfaffian, zeros

# 非奇异实例的最大重试次数
MAX_ATTEMPTS = 64


def random_fraction(rng: np.random.Generator, bound: int = 5, max_den: int = 4) -> Fraction:
    return Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, max_den + 1)))


def random_matrix(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    out = zeros(rows, cols)
    for i in range(rows):
        for j in range(cols):
            out[i, j] = random_fraction(rng)
    return out


def random_skew(rng: np.random.Generator, dim: int) -> np.ndarray:
    out = zeros(dim, dim)
    for i in range(dim):
        for j in range(i + 1, dim):
            x = random_fraction(rng)
            out[i, j] = x
            out[j, i] = -x
    return out


def random_invertible(rng: np.random.Generator, dim: int) -> np.ndarray:
    for _ in range(MAX_ATTEMPTS):
        A = random_matrix(rng, dim, dim)
        if det(A) != 0:
            return A
    raise SingularMatrixError("random", Fraction(0))


def random_invertible_skew(rng: np.random.Generator, dim: int) -> np.ndarray:
    """偶数阶非奇异反对称矩阵"""
    for _ in range(MAX_ATTEMPTS):
        A = random_skew(rng, dim)
        if pfaffian(A) != 0:
            return A
    raise SingularMatrixError("random skew", Fraction(0))


def random_window(rng: np.random.Generator, size: int) -> Optional[List[int]]:
    """约一半概率返回 None（窗口为全集），否则返回随机子集"""
    if rng.random() < 0.5:
        return None
    return [i for i in range(size) if rng.random() < 0.6]


def random_lensemble(
    rng: np.random.Generator, size: int, windowed: bool = True
) -> LEnsemble:
    """点标签为 0..size−1 的随机(条件) L-系综"""
    for _ in range(MAX_ATTEMPTS):
        window = random_window(rng, size) if windowed else None
        try:
            return LEnsemble.build(range(size), random_matrix(rng, size, size), window)
        except SingularMatrixError:
            continue
    raise SingularMatrixError("I_Y + L", Fraction(0))


def random_pf_lensemble(
    rng: np.random.Generator, size: int, windowed: bool = True
) -> PfLEnsemble:
    for _ in range(MAX_ATTEMPTS):
        window = random_window(rng, size) if windowed else None
        try:
            return PfLEnsemble.build(range(size), random_skew(rng, 2 * size), window)
        except SingularMatrixError:
            continue
    raise SingularMatrixError("J_Y + L", Fraction(0))


def _levels(sizes: Sequence[int]) -> List[GroundSet]:
    return [GroundSet(tuple(range(size))) for size in sizes]


def random_level_sizes(rng: np.random.Generator, k: int, low: int, high: int) -> List[int]:
    return [int(rng.integers(low, high + 1)) for _ in range(k)]


def random_em_spec(rng: np.random.Generator, n: int, sizes: Sequence[int]) -> EMSpec:
    """det M ≠ 0 的随机多层过程，各层大小不小于 n"""
    for _ in range(MAX_ATTEMPTS):
        spec = EMSpec(
            _levels(sizes),
            n,
            random_matrix(rng, n, sizes[0]),
            [random_matrix(rng, a, b) for a, b in zip(sizes, sizes[1:])],
            random_matrix(rng, sizes[-1], n),
        )
        if det(spec.M) != 0:
            return spec
    raise SingularMatrixError("M", Fraction(0))


def random_pf_em_spec(rng: np.random.Generator, n: int, sizes: Sequence[int]) -> PfEMSpec:
    """pf N ≠ 0 的随机Pfaffian多层过程，各层大小不小于 2n"""
    for _ in range(MAX_ATTEMPTS):
        spec = PfEMSpec(
            _levels(sizes),
            n,
            random_skew(rng, sizes[0]),
            [random_matrix(rng, a, b) for a, b in zip(sizes, sizes[1:])],
            random_matrix(rng, sizes[-1], 2 * n),
        )
        if pfaffian(spec.N) != 0:
            return spec
    raise SingularMatrixError("N", Fraction(0))


def random_specialization(
    rng: np.random.Generator, count: int, max_den: int = 6, positive: bool = False
) -> Specialization:
    """变量为分母不超过 max_den 的真分数"""
    values = []
    for _ in range(count):
        den = int(rng.integers(2, max_den + 1))
        num = int(rng.integers(1, den))
        sign = 1 if positive or rng.random() < 0.5 else -1
        values.append(Fraction(sign * num, den))
    return Specialization(tuple(values))


def random_table(rng: np.random.Generator, n: int) -> ProbTable:
    """正有理概率表"""
    ground = GroundSet(tuple(range(n)))
    weights = [Fraction(int(rng.integers(1, 10))) for _ in range(1 << n)]
    total = sum(weights)
    return ProbTable(ground, {Config(mask, n): w / total for mask, w in enumerate(weights)})


def random_witness(rng: np.random.Generator, n: int, m: int) -> KernelWitness:
    """点不恒为零的随机行列式见证"""
    for _ in range(MAX_ATTEMPTS):
        K = random_matrix(rng, n + m, n + m)
        if m == 0 or det(K[n:, n:]) != 0:
            return KernelWitness(n, m, K)
    raise SingularMatrixError("K", Fraction(0))


def random_four_factor_point(rng: np.random.Generator, complex_values: bool = False) -> TensorPoint:
    """支撑在 ∅、13、14、23、24、1234 上且 p_∅ = 1 的四因子张量点"""
    if complex_values:
        def value():
            return complex(rng.normal(), rng.normal())

        one = 1 + 0j
    else:
        def value():
            # 零值会让二次方程退化，这里只取非零有理数
            x = random_fraction(rng)
            while x == 0:
                x = random_fraction(rng)
            return x

        one = Fraction(1)
    coeffs = {0: one}
    for mask in (P13, P14, P23, P24, P1234):
        coeffs[mask] = value()
    zero = one - one
    return TensorPoint(4, tuple(coeffs.get(mask, zero) for mask in range(16)))
