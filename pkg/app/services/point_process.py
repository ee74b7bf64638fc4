"""
有限集上的行列式与Pfaffian点过程服务
L-系综概率、条件L-系综、关联核、暴力枚举参照与枚举采样。
"""
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.core.config import get_settings
from app.core.exceptions import (
    DimensionMismatchError,
    EnumerationCapError,
    IndexRangeError,
    InputError,
    NegativeProbabilityError,
    NotSkewSymmetricError,
    SingularMatrixError,
)
from app.core.logging import computation_logger, error_logger
from app.utils.linalg import (
    Scalar,
    det,
    identity,
    inverse,
    is_exact,
    is_skew,
    pfaffian,
    require_square,
    submatrix,
    zeros,
)

settings = get_settings()


@dataclass(frozen=True)
class GroundSet:
    """有限基础集：有序、互不相同的点标签"""

    points: Tuple[Hashable, ...]
    _index: Dict[Hashable, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        points = tuple(self.points)
        index = {p: i for i, p in enumerate(points)}
        if len(index) != len(points):
            raise InputError("基础集的点标签必须互不相同")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "_index", index)

    @property
    def size(self) -> int:
        return len(self.points)

    def index(self, label: Hashable) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise IndexRangeError(f"点 {label!r} 不在基础集中") from None

    def config(self, labels: Iterable[Hashable]) -> "Config":
        mask = 0
        for label in labels:
            mask |= 1 << self.index(label)
        return Config(mask, self.size)

    def labels(self, config: "Config") -> Tuple[Hashable, ...]:
        return tuple(self.points[i] for i in config.members())

    def all_configs(self) -> Iterator["Config"]:
        check_enumeration_cap(self.size)
        for mask in range(1 << self.size):
            yield Config(mask, self.size)

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True)
class Config:
    """点构型：基础集上的位掩码"""

    mask: int
    size: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.size:
            raise IndexRangeError(f"位掩码 {self.mask:#b} 超出基础集大小 {self.size}")

    @classmethod
    def from_indices(cls, indices: Iterable[int], size: int) -> "Config":
        mask = 0
        for i in indices:
            if not 0 <= i < size:
                raise IndexRangeError(f"下标 {i} 越界")
            mask |= 1 << i
        return cls(mask, size)

    def members(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.size) if self.mask >> i & 1)

    def issubset(self, other: "Config") -> bool:
        return self.mask & ~other.mask == 0

    @property
    def count(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def __str__(self) -> str:
        return format(self.mask, f"0{self.size}b")[::-1] if self.size else ""


def check_enumeration_cap(size: int) -> None:
    if size > settings.dpp_max_enum:
        raise EnumerationCapError(
            f"基础集大小 {size} 超出枚举上限 {settings.dpp_max_enum} (DPP_MAX_ENUM)"
        )


def _window_config(ground: GroundSet, window: Optional[Iterable[Hashable]]) -> Config:
    if window is None:
        return Config((1 << ground.size) - 1, ground.size)
    return ground.config(window)


def pf_coords(indices: Iterable[int]) -> List[int]:
    """点 i 对应扁平反对称矩阵的行列 (2i, 2i+1)，带撇坐标在前"""
    return [c for i in indices for c in (2 * i, 2 * i + 1)]


@dataclass
class LEnsemble:
    """(条件) L-系综"""

    ground: GroundSet
    L: np.ndarray
    window: Optional[Config] = None

    def __post_init__(self):
        n = require_square(self.L, "L")
        if n != self.ground.size:
            raise DimensionMismatchError("L", (self.ground.size, self.ground.size), self.L.shape)
        if self.window is None:
            self.window = _window_config(self.ground, None)
        if self.window.size != self.ground.size:
            raise DimensionMismatchError("window", self.ground.size, self.window.size)
        self.normalizer = det(self.shifted())
        if self.normalizer == 0:
            raise SingularMatrixError("I_Y + L", self.normalizer)

    @classmethod
    def build(cls, ground: Sequence[Hashable], L: np.ndarray, window=None) -> "LEnsemble":
        gs = GroundSet(tuple(ground))
        return cls(gs, L, None if window is None else gs.config(window))

    def identity_window(self) -> np.ndarray:
        """I_𝒴：窗口上为单位阵的对角矩阵"""
        out = zeros(self.ground.size, self.ground.size, is_exact(self.L))
        for i in self.window.members():
            out[i, i] = out[i, i] + 1
        return out

    def shifted(self) -> np.ndarray:
        return self.identity_window() + self.L

    def window_ground(self) -> GroundSet:
        return GroundSet(self.ground.labels(self.window))


@dataclass
class PfLEnsemble:
    """(条件) Pfaffian L-系综，L 为 2|𝔛| 阶反对称矩阵"""

    ground: GroundSet
    L: np.ndarray
    window: Optional[Config] = None

    def __post_init__(self):
        n = require_square(self.L, "L")
        if n != 2 * self.ground.size:
            raise DimensionMismatchError("L", (2 * self.ground.size,) * 2, self.L.shape)
        if not is_skew(self.L):
            raise NotSkewSymmetricError("L")
        if self.window is None:
            self.window = _window_config(self.ground, None)
        if self.window.size != self.ground.size:
            raise DimensionMismatchError("window", self.ground.size, self.window.size)
        self.normalizer = pfaffian(self.shifted())
        if self.normalizer == 0:
            raise SingularMatrixError("J_Y + L", self.normalizer)

    @classmethod
    def build(cls, ground: Sequence[Hashable], L: np.ndarray, window=None) -> "PfLEnsemble":
        gs = GroundSet(tuple(ground))
        return cls(gs, L, None if window is None else gs.config(window))

    def j_window(self) -> np.ndarray:
        """J_𝒴：窗口中每个点的块为 [[0,1],[−1,0]]"""
        out = zeros(2 * self.ground.size, 2 * self.ground.size, is_exact(self.L))
        for i in self.window.members():
            out[2 * i, 2 * i + 1] = out[2 * i, 2 * i + 1] + 1
            out[2 * i + 1, 2 * i] = out[2 * i + 1, 2 * i] - 1
        return out

    def shifted(self) -> np.ndarray:
        return self.j_window() + self.L

    def window_ground(self) -> GroundSet:
        return GroundSet(self.ground.labels(self.window))


@dataclass
class Kernel:
    """行列式关联核"""

    ground: GroundSet
    K: np.ndarray

    def __post_init__(self):
        if require_square(self.K, "K") != self.ground.size:
            raise DimensionMismatchError("K", self.ground.size, self.K.shape)


@dataclass
class PfKernel:
    """Pfaffian关联核：2×2 块反对称矩阵"""

    ground: GroundSet
    K: np.ndarray

    def __post_init__(self):
        if require_square(self.K, "K") != 2 * self.ground.size:
            raise DimensionMismatchError("K", 2 * self.ground.size, self.K.shape)

    def block(self, x: int, y: int) -> np.ndarray:
        return self.K[2 * x : 2 * x + 2, 2 * y : 2 * y + 2]


@dataclass
class ProbTable:
    """概率表：构型 → 概率（允许带符号或复数值）"""

    ground: GroundSet
    probs: Dict[Config, Scalar]

    def prob(self, config: Config) -> Scalar:
        return self.probs.get(config, Fraction(0))

    def total(self) -> Scalar:
        values = list(self.probs.values())
        return sum(values[1:], values[0]) if values else Fraction(0)

    def is_normalized(self, tol: float = 1e-12) -> bool:
        total = self.total()
        if isinstance(total, Fraction):
            return total == 1
        return abs(complex(total) - 1) <= tol


# ---------------------------------------------------------------- L-系综


def lensemble_prob(E: LEnsemble, X: Config) -> Scalar:
    """Prob{X} = det L_{X∪𝒴̄} / det(I_𝒴 + L)；X 与 𝒴̄ 相交时为 0"""
    full = (1 << E.ground.size) - 1
    outside = full & ~E.window.mask
    if X.mask & outside:
        return E.normalizer - E.normalizer
    members = Config(X.mask | outside, E.ground.size).members()
    return det(submatrix(E.L, members, members)) / E.normalizer


def lensemble_table(E: LEnsemble) -> ProbTable:
    """窗口上的完整概率表（以窗口为基础集）"""
    start = time.perf_counter()
    window_ground = E.window_ground()
    window_idx = E.window.members()
    probs = {}
    for sub in window_ground.all_configs():
        X = Config.from_indices((window_idx[i] for i in sub.members()), E.ground.size)
        probs[sub] = lensemble_prob(E, X)
    computation_logger.log_enumeration("l-ensemble", len(probs), time.perf_counter() - start)
    return ProbTable(window_ground, probs)


def lensemble_kernel(E: LEnsemble) -> Kernel:
    """K = I_𝒴 − (I_𝒴 + L)⁻¹ 限制在 𝒴×𝒴 上（𝒴 = 𝔛 时等于 L(I+L)⁻¹）"""
    start = time.perf_counter()
    try:
        inv = inverse(E.shifted(), "I_Y + L")
    except SingularMatrixError as exc:
        error_logger.log_numeric_error("lensemble_kernel", exc)
        raise
    idx = E.window.members()
    K = identity(len(idx), is_exact(E.L)) - submatrix(inv, idx, idx)
    computation_logger.log_kernel_built(
        "l-ensemble", len(idx), is_exact(E.L), time.perf_counter() - start
    )
    return Kernel(E.window_ground(), K)


def pf_lensemble_prob(E: PfLEnsemble, X: Config) -> Scalar:
    """Prob{X} = pf L_{X∪𝒴̄} / pf(J_𝒴 + L)"""
    full = (1 << E.ground.size) - 1
    outside = full & ~E.window.mask
    if X.mask & outside:
        return E.normalizer - E.normalizer
    coords = pf_coords(Config(X.mask | outside, E.ground.size).members())
    return pfaffian(submatrix(E.L, coords, coords)) / E.normalizer


def pf_lensemble_table(E: PfLEnsemble) -> ProbTable:
    start = time.perf_counter()
    window_ground = E.window_ground()
    window_idx = E.window.members()
    probs = {}
    for sub in window_ground.all_configs():
        X = Config.from_indices((window_idx[i] for i in sub.members()), E.ground.size)
        probs[sub] = pf_lensemble_prob(E, X)
    computation_logger.log_enumeration(
        "pfaffian-l-ensemble", len(probs), time.perf_counter() - start
    )
    return ProbTable(window_ground, probs)


def pf_lensemble_kernel(E: PfLEnsemble) -> PfKernel:
    """K = J_𝒴 + (J_𝒴 + L)⁻¹ 限制在 𝒴 的坐标上"""
    start = time.perf_counter()
    try:
        inv = inverse(E.shifted(), "J_Y + L")
    except SingularMatrixError as exc:
        error_logger.log_numeric_error("pf_lensemble_kernel", exc)
        raise
    coords = pf_coords(E.window.members())
    K = submatrix(E.j_window() + inv, coords, coords)
    computation_logger.log_kernel_built(
        "pfaffian-l-ensemble", len(coords) // 2, is_exact(E.L), time.perf_counter() - start
    )
    return PfKernel(E.window_ground(), K)


# ---------------------------------------------------------------- 关联函数


def brute_force_correlations(T: ProbTable) -> Dict[Config, Scalar]:
    """ρ(Y) = Σ_{X ⊇ Y} T(X)：按固定顺序做超集求和变换"""
    n = T.ground.size
    check_enumeration_cap(n)
    values = [T.prob(Config(mask, n)) for mask in range(1 << n)]
    for bit in range(n):
        step = 1 << bit
        for mask in range(1 << n):
            if not mask & step:
                values[mask] = values[mask] + values[mask | step]
    return {Config(mask, n): values[mask] for mask in range(1 << n)}


def kernel_correlation(K: Union[Kernel, PfKernel], Y: Config) -> Scalar:
    """ρ(Y) = det K_Y 或 pf K_Y"""
    if Y.size != K.ground.size:
        raise DimensionMismatchError("Y", K.ground.size, Y.size)
    members = Y.members()
    if isinstance(K, PfKernel):
        coords = pf_coords(members)
        return pfaffian(submatrix(K.K, coords, coords))
    return det(submatrix(K.K, members, members))


def subsets_up_to(ground: GroundSet, size: int) -> Iterator[Config]:
    """大小不超过 size 的全部子集，按大小再按字典序"""
    for k in range(min(size, ground.size) + 1):
        for combo in combinations(range(ground.size), k):
            yield Config.from_indices(combo, ground.size)


def gauge_transform(K: Kernel, diagonal: Sequence[Scalar]) -> Kernel:
    """对角共轭 D K D⁻¹，主子式不变"""
    d = np.array(list(diagonal), dtype=K.K.dtype)
    return Kernel(K.ground, (d[:, None] * K.K) / d[None, :])


# ---------------------------------------------------------------- 采样


def _real_probabilities(T: ProbTable) -> List[Tuple[Config, float]]:
    check_enumeration_cap(T.ground.size)
    out = []
    for mask in range(1 << T.ground.size):
        config = Config(mask, T.ground.size)
        p = T.prob(config)
        if isinstance(p, complex):
            if abs(p.imag) > settings.float_tolerance:
                raise NegativeProbabilityError(f"构型 {config} 的概率不是实数: {p}")
            p = p.real
        if p < 0:
            raise NegativeProbabilityError(f"构型 {config} 的概率为负: {p}")
        out.append((config, float(p)))
    total = sum(p for _, p in out)
    if abs(total - 1) > 1e-9:
        raise NegativeProbabilityError(f"概率表未归一化: 总和 {total}")
    return out


def enumerate_samples(T: ProbTable, seed: int, size: int) -> List[Config]:
    """逆累积分布采样，同一种子结果确定"""
    table = _real_probabilities(T)
    cdf = np.cumsum([p for _, p in table])
    rng = np.random.default_rng(seed)
    draws = rng.random(size) * cdf[-1]
    positions = np.searchsorted(cdf, draws, side="right")
    return [table[min(int(k), len(table) - 1)][0] for k in positions]


def enumerate_sample(T: ProbTable, seed: int) -> Config:
    return enumerate_samples(T, seed, 1)[0]
