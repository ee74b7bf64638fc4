"""
多层行列式与Pfaffian过程服务
权重、归一化常数、嵌入的条件L-系综以及闭式关联核。
层号从1开始，层内点在权重与构型中用下标表示，在核的基础集中保留该层的标签。
"""
import time
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, product
from typing import Hashable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from app.core.exceptions import (
    DimensionMismatchError,
    IndexRangeError,
    NotSkewSymmetricError,
    SingularMatrixError,
)
from app.core.logging import computation_logger, error_logger
from app.services.point_process import (
    Config,
    GroundSet,
    Kernel,
    LEnsemble,
    PfKernel,
    PfLEnsemble,
    ProbTable,
    check_enumeration_cap,
)
from app.utils.linalg import (
    Scalar,
    det,
    identity,
    inverse,
    is_exact,
    is_skew,
    pfaffian,
    submatrix,
    to_float,
    zeros,
)


class KernelReading(str, Enum):
    """Eynard-Mehta 核第一项右因子的两种写法"""

    FROM_FIRST = "from-first"  # Φ W_{[1,j)}
    FROM_ROW = "from-row"  # Φ W_{[i,j)}，要求各层大小相同


@dataclass(frozen=True)
class LevelPoint:
    """多层基础集中的点：层号与该层的点标签"""

    level: int
    point: Hashable

    def __str__(self) -> str:
        return f"({self.level},{self.point})"


def _check_chain(levels: Sequence[GroundSet], mats: Sequence[np.ndarray], name: str):
    if len(mats) != len(levels) - 1:
        raise DimensionMismatchError(name, len(levels) - 1, len(mats))
    for m, W in enumerate(mats, 1):
        expected = (levels[m - 1].size, levels[m].size)
        if W.shape != expected:
            raise DimensionMismatchError(f"{name}[{m}]", expected, W.shape)


@dataclass
class EMSpec:
    """Eynard-Mehta 多层过程：Φ (n×|𝔛⁽¹⁾|)、W_1…W_{k−1}、Ψ (|𝔛⁽ᵏ⁾|×n)"""

    levels: List[GroundSet]
    n: int
    Phi: np.ndarray
    Ws: List[np.ndarray]
    Psi: np.ndarray
    M: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.levels:
            raise DimensionMismatchError("levels", "至少一层", 0)
        if self.Phi.shape != (self.n, self.levels[0].size):
            raise DimensionMismatchError("Phi", (self.n, self.levels[0].size), self.Phi.shape)
        if self.Psi.shape != (self.levels[-1].size, self.n):
            raise DimensionMismatchError("Psi", (self.levels[-1].size, self.n), self.Psi.shape)
        _check_chain(self.levels, self.Ws, "Ws")
        if not self.exact:
            self.Phi, self.Psi = to_float(self.Phi), to_float(self.Psi)
            self.Ws = [to_float(W) for W in self.Ws]
        self.M = self.Phi @ chain_product(self.Ws, self.sizes, 1, self.k, self.exact) @ self.Psi

    @property
    def k(self) -> int:
        return len(self.levels)

    @property
    def sizes(self) -> List[int]:
        return [g.size for g in self.levels]

    @property
    def exact(self) -> bool:
        return all(is_exact(A) for A in [self.Phi, self.Psi, *self.Ws])


@dataclass
class PfEMSpec:
    """Pfaffian多层过程：ε (𝔛⁽¹⁾上的反对称矩阵)、V_1…V_{k−1}、Ξ (|𝔛⁽ᵏ⁾|×2n)"""

    levels: List[GroundSet]
    n: int
    epsilon: np.ndarray
    Vs: List[np.ndarray]
    Xi: np.ndarray
    N: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.levels:
            raise DimensionMismatchError("levels", "至少一层", 0)
        size1 = self.levels[0].size
        if self.epsilon.shape != (size1, size1):
            raise DimensionMismatchError("epsilon", (size1, size1), self.epsilon.shape)
        if not is_skew(self.epsilon):
            raise NotSkewSymmetricError("epsilon")
        if self.Xi.shape != (self.levels[-1].size, 2 * self.n):
            raise DimensionMismatchError(
                "Xi", (self.levels[-1].size, 2 * self.n), self.Xi.shape
            )
        _check_chain(self.levels, self.Vs, "Vs")
        if not self.exact:
            self.epsilon, self.Xi = to_float(self.epsilon), to_float(self.Xi)
            self.Vs = [to_float(V) for V in self.Vs]
        V = self.chain(1, self.k)
        self.N = self.Xi.T @ V.T @ self.epsilon @ V @ self.Xi

    @property
    def k(self) -> int:
        return len(self.levels)

    @property
    def sizes(self) -> List[int]:
        return [g.size for g in self.levels]

    @property
    def exact(self) -> bool:
        return all(is_exact(A) for A in [self.epsilon, self.Xi, *self.Vs])

    def chain(self, i: int, j: int) -> np.ndarray:
        return chain_product(self.Vs, self.sizes, i, j, self.exact)


# ---------------------------------------------------------------- 区间乘积


def chain_product(
    mats: Sequence[np.ndarray], sizes: Sequence[int], i: int, j: int, exact: bool
) -> np.ndarray:
    """W_i ⋯ W_{j−1}；i = j 时为空乘积（单位阵）"""
    if not 1 <= i <= j <= len(sizes):
        raise IndexRangeError(f"区间 [{i},{j}) 无效")
    out = identity(sizes[i - 1], exact)
    for m in range(i, j):
        out = out @ mats[m - 1]
    return out


def interval_product(
    mats: Sequence[np.ndarray], sizes: Sequence[int], i: int, j: int, exact: bool
) -> np.ndarray:
    """W_{[i,j)}：i < j 时为乘积，i ≥ j 时为相应形状的零矩阵"""
    k = len(sizes)
    if not (1 <= i <= k and 1 <= j <= k):
        raise IndexRangeError(f"层号越界: i={i}, j={j}, k={k}")
    if i >= j:
        return zeros(sizes[i - 1], sizes[j - 1], exact)
    return chain_product(mats, sizes, i, j, exact)


def w_interval(spec, i: int, j: int) -> np.ndarray:
    """EMSpec 取 W 链，PfEMSpec 取 V 链"""
    mats = spec.Ws if isinstance(spec, EMSpec) else spec.Vs
    return interval_product(mats, spec.sizes, i, j, spec.exact)


# ---------------------------------------------------------------- 基础集与构型


def em_ground(spec) -> GroundSet:
    """各层点的不交并，按层号再按层内顺序排列"""
    return GroundSet(
        tuple(LevelPoint(m, x) for m, level in enumerate(spec.levels, 1) for x in level.points)
    )


def _level_offsets(sizes: Sequence[int]) -> List[int]:
    offsets, total = [], 0
    for size in sizes:
        offsets.append(total)
        total += size
    return offsets


def _check_configs(spec, configs: Sequence[Sequence[int]], per_level: int):
    if len(configs) != spec.k:
        raise DimensionMismatchError("configs", spec.k, len(configs))
    out = []
    for m, (points, size) in enumerate(zip(configs, spec.sizes), 1):
        idx = tuple(sorted(points))
        if len(idx) != per_level or len(set(idx)) != len(idx):
            raise DimensionMismatchError(f"第 {m} 层构型", per_level, len(idx))
        if idx and (idx[0] < 0 or idx[-1] >= size):
            raise IndexRangeError(f"第 {m} 层的点下标越界: {idx}")
        out.append(idx)
    return out


def level_configs(spec, per_level: int) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """每层恰好 per_level 个点的全部多层构型"""
    check_enumeration_cap(sum(spec.sizes))
    return product(*(combinations(range(size), per_level) for size in spec.sizes))


def config_mask(spec, configs: Sequence[Sequence[int]]) -> Config:
    offsets = _level_offsets(spec.sizes)
    indices = [offsets[m] + x for m, points in enumerate(configs) for x in points]
    return Config.from_indices(indices, sum(spec.sizes))


# ---------------------------------------------------------------- 行列式情形


def em_weight(spec: EMSpec, configs: Sequence[Sequence[int]]) -> Scalar:
    """det[φ_i(x_j⁽¹⁾)] · Π det[W_m(x⁽ᵐ⁾, x⁽ᵐ⁺¹⁾)] · det[ψ_i(x_j⁽ᵏ⁾)]"""
    xs = _check_configs(spec, configs, spec.n)
    value = det(submatrix(spec.Phi, range(spec.n), xs[0]))
    for m, W in enumerate(spec.Ws):
        value = value * det(submatrix(W, xs[m], xs[m + 1]))
    return value * det(submatrix(spec.Psi, xs[-1], range(spec.n)))


def em_partition(spec: EMSpec) -> Scalar:
    """det M，M = Φ W_1 ⋯ W_{k−1} Ψ"""
    return det(spec.M)


def em_enumerate(spec: EMSpec) -> ProbTable:
    """归一化权重表 em_weight / det M"""
    start = time.perf_counter()
    Z = em_partition(spec)
    if Z == 0:
        raise SingularMatrixError("M", Z)
    probs = {}
    for configs in level_configs(spec, spec.n):
        probs[config_mask(spec, configs)] = em_weight(spec, configs) / Z
    computation_logger.log_enumeration("eynard-mehta", len(probs), time.perf_counter() - start)
    return ProbTable(em_ground(spec), probs)


def em_kernel(spec: EMSpec, reading: KernelReading = KernelReading.FROM_FIRST) -> Kernel:
    """K_ij = W_{[i,k)} Ψ M⁻¹ Φ W_{[1,j)} − W_{[i,j)}

    乘积内部的空区间取单位阵，单独的减项在 i ≥ j 时为0。
    """
    start = time.perf_counter()
    k, sizes, exact = spec.k, spec.sizes, spec.exact
    if reading == KernelReading.FROM_ROW and len(set(sizes)) > 1:
        raise DimensionMismatchError("levels", "各层大小相同", sizes)
    try:
        M_inv = inverse(spec.M, "M")
    except SingularMatrixError as exc:
        error_logger.log_numeric_error("em_kernel", exc)
        raise
    core = spec.Psi @ M_inv @ spec.Phi
    rows = []
    for i in range(1, k + 1):
        left = chain_product(spec.Ws, sizes, i, k, exact) @ core
        row = []
        for j in range(1, k + 1):
            if reading == KernelReading.FROM_FIRST:
                right = chain_product(spec.Ws, sizes, 1, j, exact)
            elif i <= j:
                right = chain_product(spec.Ws, sizes, i, j, exact)
            else:
                right = zeros(sizes[0], sizes[j - 1], exact)
            row.append(left @ right - interval_product(spec.Ws, sizes, i, j, exact))
        rows.append(row)
    K = _object_block(rows)
    computation_logger.log_kernel_built("eynard-mehta", K.shape[0], exact, time.perf_counter() - start)
    return Kernel(em_ground(spec), K)


def _object_block(rows: List[List[np.ndarray]]) -> np.ndarray:
    # 逐块拼接，精确矩阵保持 dtype=object
    return np.concatenate([np.concatenate(row, axis=1) for row in rows], axis=0)


def _virtual_labels(count: int) -> Tuple[Tuple[str, int], ...]:
    return tuple(("virtual", a) for a in range(1, count + 1))


def em_embed_L(spec: EMSpec) -> LEnsemble:
    """条件L-系综：虚拟点 {1..n} 在前，窗口为全部层点

    L 的非零块：Φ 在 虚拟×𝔛⁽¹⁾，−W_m 在 𝔛⁽ᵐ⁾×𝔛⁽ᵐ⁺¹⁾，Ψ 在 𝔛⁽ᵏ⁾×虚拟。
    """
    n, sizes, exact = spec.n, spec.sizes, spec.exact
    offsets = [n + o for o in _level_offsets(sizes)]
    dim = n + sum(sizes)
    L = zeros(dim, dim, exact)
    L[:n, offsets[0] : offsets[0] + sizes[0]] = spec.Phi
    for m, W in enumerate(spec.Ws):
        L[offsets[m] : offsets[m] + sizes[m], offsets[m + 1] : offsets[m + 1] + sizes[m + 1]] = -W
    L[offsets[-1] : offsets[-1] + sizes[-1], :n] = spec.Psi
    ground = GroundSet(_virtual_labels(n) + em_ground(spec).points)
    window = Config.from_indices(range(n, dim), dim)
    return LEnsemble(ground, L, window)


# ---------------------------------------------------------------- Pfaffian情形


def pf_em_weight(spec: PfEMSpec, configs: Sequence[Sequence[int]]) -> Scalar:
    """pf[ε(x_i⁽¹⁾, x_j⁽¹⁾)] · Π det[V_m(x⁽ᵐ⁾, x⁽ᵐ⁺¹⁾)] · det[ξ_i(x_j⁽ᵏ⁾)]"""
    xs = _check_configs(spec, configs, 2 * spec.n)
    value = pfaffian(submatrix(spec.epsilon, xs[0], xs[0]))
    for m, V in enumerate(spec.Vs):
        value = value * det(submatrix(V, xs[m], xs[m + 1]))
    return value * det(submatrix(spec.Xi, xs[-1], range(2 * spec.n)))


def pf_em_partition(spec: PfEMSpec) -> Scalar:
    """pf N，N = Ξᵗ V_{[1,k)}ᵗ ε V_{[1,k)} Ξ"""
    return pfaffian(spec.N, "N")


def pf_em_enumerate(spec: PfEMSpec) -> ProbTable:
    start = time.perf_counter()
    Z = pf_em_partition(spec)
    if Z == 0:
        raise SingularMatrixError("N", Z)
    probs = {}
    for configs in level_configs(spec, 2 * spec.n):
        probs[config_mask(spec, configs)] = pf_em_weight(spec, configs) / Z
    computation_logger.log_enumeration(
        "pfaffian-eynard-mehta", len(probs), time.perf_counter() - start
    )
    return ProbTable(em_ground(spec), probs)


def pf_em_blocks(spec: PfEMSpec, i: int, j: int, G: np.ndarray) -> Tuple[np.ndarray, ...]:
    """(i, j) 层对的 K11、K12、K21、K22 四个块，G = Ξ N⁻¹ Ξᵗ"""
    k = spec.k
    Vc = spec.chain
    eps = spec.epsilon

    def vz(a: int, b: int) -> np.ndarray:
        return interval_product(spec.Vs, spec.sizes, a, b, spec.exact)

    K11 = Vc(i, k) @ G @ Vc(j, k).T
    K12 = Vc(i, k) @ G @ Vc(1, k).T @ eps @ Vc(1, j) - vz(i, j)
    K21 = -Vc(1, i).T @ eps @ Vc(1, k) @ G @ Vc(j, k).T + vz(j, i).T
    K22 = (
        -Vc(1, i).T @ eps @ Vc(1, k) @ G @ Vc(1, k).T @ eps @ Vc(1, j)
        + Vc(1, i).T @ eps @ Vc(1, j)
    )
    return K11, K12, K21, K22


def pf_em_kernel(spec: PfEMSpec) -> PfKernel:
    """2×2 块反对称核，点 x 占据坐标 (2x, 2x+1)"""
    start = time.perf_counter()
    try:
        N_inv = inverse(spec.N, "N")
    except SingularMatrixError as exc:
        error_logger.log_numeric_error("pf_em_kernel", exc)
        raise
    G = spec.Xi @ N_inv @ spec.Xi.T
    offsets = _level_offsets(spec.sizes)
    total = sum(spec.sizes)
    K = zeros(2 * total, 2 * total, spec.exact)
    if not spec.exact:
        K = K.astype(np.result_type(spec.epsilon, spec.Xi, *spec.Vs))
    for i in range(1, spec.k + 1):
        for j in range(1, spec.k + 1):
            blocks = pf_em_blocks(spec, i, j, G)
            for (a, b), block in zip(((0, 0), (0, 1), (1, 0), (1, 1)), blocks):
                rows = [2 * (offsets[i - 1] + x) + a for x in range(spec.sizes[i - 1])]
                cols = [2 * (offsets[j - 1] + y) + b for y in range(spec.sizes[j - 1])]
                K[np.ix_(rows, cols)] = block
    computation_logger.log_kernel_built(
        "pfaffian-eynard-mehta", total, spec.exact, time.perf_counter() - start
    )
    return PfKernel(em_ground(spec), K)


def pf_em_embed_L(spec: PfEMSpec) -> PfLEnsemble:
    """条件Pfaffian L-系综：n 个虚拟点（2n 个坐标）在前，窗口为全部层点

    ε 位于 𝔛⁽¹⁾′×𝔛⁽¹⁾′，V_m 位于 𝔛⁽ᵐ⁾″×𝔛⁽ᵐ⁺¹⁾′，Ξ 位于 虚拟坐标×𝔛⁽ᵏ⁾″，其余由反对称性确定。
    """
    n, sizes, exact = spec.n, spec.sizes, spec.exact
    offsets = [n + o for o in _level_offsets(sizes)]
    points = n + sum(sizes)
    L = zeros(2 * points, 2 * points, exact)
    if not exact:
        L = L.astype(np.result_type(spec.epsilon, spec.Xi, *spec.Vs))

    def primed(m: int) -> List[int]:
        return [2 * (offsets[m] + x) for x in range(sizes[m])]

    def double_primed(m: int) -> List[int]:
        return [2 * (offsets[m] + x) + 1 for x in range(sizes[m])]

    L[np.ix_(primed(0), primed(0))] = spec.epsilon
    for m, V in enumerate(spec.Vs):
        L[np.ix_(double_primed(m), primed(m + 1))] = V
        L[np.ix_(primed(m + 1), double_primed(m))] = -V.T
    virtual = list(range(2 * n))
    L[np.ix_(virtual, double_primed(spec.k - 1))] = spec.Xi.T
    L[np.ix_(double_primed(spec.k - 1), virtual)] = -spec.Xi
    ground = GroundSet(_virtual_labels(n) + em_ground(spec).points)
    window = Config.from_indices(range(n, points), points)
    return PfLEnsemble(ground, L, window)
