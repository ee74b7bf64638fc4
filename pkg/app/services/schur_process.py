"""
Schur过程与Pfaffian Schur过程服务
交错分拆序列的权重与枚举参照、Toeplitz矩阵、双重围道积分关联核，
以及把窗口截断的Schur过程写成 Eynard-Mehta 多层过程的桥接。
"""
import time
from dataclasses import dataclass
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import get_settings
from app.core.exceptions import (
    ContourError,
    DimensionMismatchError,
    InputError,
    TailBoundError,
    WindowTooSmallError,
)
from app.core.logging import computation_logger, error_logger
from app.services.eynard_mehta import EMSpec
from app.services.point_process import Config, GroundSet
from app.services.symfunc import (
    EMPTY,
    H_eval,
    Partition,
    SeriesTruncation,
    Specialization,
    h_lookup,
    pairing_entry,
    partitions_up_to,
    pf_Z,
    schur,
    schur_Z,
    series_tail_bound,
    skew_schur,
    tau_pf,
    union_all,
)
from app.utils.cache_manager import cached
from app.utils.contour import ContourConfig, laurent_coefficient, laurent_grid
from app.utils.linalg import Scalar, as_matrix

settings = get_settings()

Window = Tuple[int, int]


@dataclass(frozen=True)
class SchurSpec:
    """Schur过程的特殊化链

    rho_plus[m] 为 ρ_m⁺ (m = 0..T−1)，rho_minus[m−1] 为 ρ_m⁻ (m = 1..T)。
    """

    T: int
    rho_plus: Tuple[Specialization, ...]
    rho_minus: Tuple[Specialization, ...]
    pfaffian_mode: bool = False

    def __post_init__(self):
        object.__setattr__(self, "rho_plus", tuple(self.rho_plus))
        object.__setattr__(self, "rho_minus", tuple(self.rho_minus))
        if self.T < 1:
            raise InputError(f"层数 T 必须为正: {self.T}")
        if len(self.rho_plus) != self.T:
            raise DimensionMismatchError("rho_plus", self.T, len(self.rho_plus))
        if len(self.rho_minus) != self.T:
            raise DimensionMismatchError("rho_minus", self.T, len(self.rho_minus))

    @classmethod
    def build(
        cls,
        rho_plus: Sequence[Sequence[Scalar]],
        rho_minus: Sequence[Sequence[Scalar]],
        pfaffian_mode: bool = False,
    ) -> "SchurSpec":
        return cls(
            len(rho_plus),
            tuple(Specialization(tuple(v)) for v in rho_plus),
            tuple(Specialization(tuple(v)) for v in rho_minus),
            pfaffian_mode,
        )

    def plus_union(self, lo: int, hi: int) -> Specialization:
        """ρ⁺_lo ∪ ⋯ ∪ ρ⁺_{hi−1}"""
        return union_all(self.rho_plus[max(lo, 0) : max(hi, 0)])

    def minus_union(self, lo: int, hi: int) -> Specialization:
        """ρ⁻_lo ∪ ⋯ ∪ ρ⁻_{hi−1}，区间 [i,T] 对应 minus_union(i, T+1)"""
        return union_all(self.rho_minus[max(lo, 1) - 1 : max(hi, 1) - 1])

    @property
    def max_modulus(self) -> float:
        return max((s.max_modulus for s in self.rho_plus + self.rho_minus), default=0.0)

    @property
    def exact(self) -> bool:
        return all(s.is_exact for s in self.rho_plus + self.rho_minus)

    def partition_function(self) -> Scalar:
        return pf_Z(self) if self.pfaffian_mode else schur_Z(self)


@dataclass(frozen=True)
class PartitionSequence:
    """∅ ⊂ λ⁽¹⁾ ⊃ μ⁽¹⁾ ⊂ λ⁽²⁾ ⊃ ⋯ ⊃ μ⁽ᵀ⁻¹⁾ ⊂ λ⁽ᵀ⁾ ⊃ ∅"""

    lambdas: Tuple[Partition, ...]
    mus: Tuple[Partition, ...] = ()

    def __post_init__(self):
        if len(self.mus) != len(self.lambdas) - 1:
            raise DimensionMismatchError("mus", len(self.lambdas) - 1, len(self.mus))

    @classmethod
    def of(cls, lambdas: Sequence[Sequence[int]], mus: Sequence[Sequence[int]] = ()):
        return cls(tuple(Partition(tuple(p)) for p in lambdas), tuple(Partition(tuple(p)) for p in mus))

    @property
    def is_interlacing(self) -> bool:
        return all(
            self.lambdas[m].contains(mu) and self.lambdas[m + 1].contains(mu)
            for m, mu in enumerate(self.mus)
        )


@dataclass(frozen=True, order=True)
class SpacePoint:
    """(层 i, 位置 u)"""

    level: int
    u: int

    def __str__(self) -> str:
        return f"({self.level},{self.u})"


@dataclass(frozen=True)
class CorrelationEstimate:
    """截断枚举得到的关联函数及其严格尾项上界"""

    value: Scalar
    tail_bound: float
    sequences: int


@dataclass(frozen=True)
class MassEstimate:
    """截断后的权重总和与配分函数"""

    enumerated: Scalar
    partition_function: Scalar
    tail_bound: float


# ---------------------------------------------------------------- 权重与构型


def weight(spec: SchurSpec, seq: PartitionSequence) -> Scalar:
    """s_{λ⁽¹⁾}(ρ₀⁺) s_{λ⁽¹⁾/μ⁽¹⁾}(ρ₁⁻) s_{λ⁽²⁾/μ⁽¹⁾}(ρ₁⁺) ⋯ s_{λ⁽ᵀ⁾}(ρ_T⁻)

    Pfaffian模式下第一个因子换成 τ_{λ⁽¹⁾}(ρ₀⁺)；不交错时权重为0。
    """
    if len(seq.lambdas) != spec.T:
        raise DimensionMismatchError("lambdas", spec.T, len(seq.lambdas))
    first = seq.lambdas[0]
    value = tau_pf(first, spec.rho_plus[0]) if spec.pfaffian_mode else schur(first, spec.rho_plus[0])
    for m, mu in enumerate(seq.mus, 1):
        if value == 0:
            return value
        value = value * skew_schur(seq.lambdas[m - 1], mu, spec.rho_minus[m - 1])
        value = value * skew_schur(seq.lambdas[m], mu, spec.rho_plus[m])
    return value * schur(seq.lambdas[-1], spec.rho_minus[-1])


def occupies(la: Partition, u: int) -> bool:
    """u ∈ {λ_j − j : j ≥ 1}"""
    if u <= -la.length - 1:
        return True
    return any(la.part(j) - j == u for j in range(1, la.length + 1))


def contains_points(seq: PartitionSequence, points: Sequence[SpacePoint]) -> bool:
    return all(occupies(seq.lambdas[p.level - 1], p.u) for p in points)


def window_ground(T: int, window: Window) -> GroundSet:
    u_min, u_max = window
    return GroundSet(
        tuple(SpacePoint(i, u) for i in range(1, T + 1) for u in range(u_min, u_max + 1))
    )


def config_of(seq: PartitionSequence, window: Window) -> Config:
    """窗口内被占据的 (层, 位置)；窗口以下必须是冻结的阶梯"""
    u_min, u_max = window
    if u_max < u_min:
        raise WindowTooSmallError(f"窗口为空: {window}")
    width = u_max - u_min + 1
    indices = []
    for i, la in enumerate(seq.lambdas):
        if la.length > -u_min:
            raise WindowTooSmallError(
                f"第 {i + 1} 层的分拆 {la} 在窗口下端 {u_min} 以下留有空位"
            )
        if la.part(1) - 1 > u_max:
            raise WindowTooSmallError(f"第 {i + 1} 层的分拆 {la} 超出窗口上端 {u_max}")
        for u in range(u_min, u_max + 1):
            if occupies(la, u):
                indices.append(i * width + u - u_min)
    return Config.from_indices(indices, len(seq.lambdas) * width)


# ---------------------------------------------------------------- 枚举参照


def _inner_shapes(la: Partition, k: int) -> Iterator[Partition]:
    """μ ⊆ λ 且 λ/μ 每列至多 k 格（即 μ_i ≥ λ_{i+k}）"""

    def rec(i: int, bound: int) -> Iterator[Tuple[int, ...]]:
        if i > la.length:
            yield ()
            return
        for p in range(min(la.part(i), bound), la.part(i + k) - 1, -1):
            for rest in rec(i + 1, p):
                yield (p,) + rest

    for parts in rec(1, la.part(1)):
        yield Partition(parts)


def _outer_shapes(mu: Partition, k: int, budget: int) -> Iterator[Partition]:
    """λ ⊇ μ 且 λ/μ 每列至多 k 格，|λ| ≤ budget"""

    def rec(i: int, bound: int, remaining: int) -> Iterator[Tuple[int, ...]]:
        low = mu.part(i)
        high = min(bound, low + remaining)
        if i > k:
            high = min(high, mu.part(i - k))
        for p in range(low, high + 1):
            if p == 0:
                yield ()
                continue
            for rest in rec(i + 1, p, remaining - (p - low)):
                yield (p,) + rest

    if budget < mu.size:
        return
    for parts in rec(1, budget, budget - mu.size):
        yield Partition(parts)


def _first_shapes(spec: SchurSpec, cutoff: int) -> Iterator[Partition]:
    if spec.pfaffian_mode:
        return partitions_up_to(cutoff)
    return _outer_shapes(EMPTY, len(spec.rho_plus[0]), cutoff)


@cached(key_prefix="schur_process.enumerate_sequences")
def enumerate_sequences(
    spec: SchurSpec, cutoff: int
) -> Tuple[Tuple[PartitionSequence, Scalar], ...]:
    """所有 |λ⁽ⁱ⁾| ≤ cutoff 且权重非零的交错序列及其权重"""
    start = time.perf_counter()
    out: List[Tuple[PartitionSequence, Scalar]] = []

    def extend(lambdas: Tuple[Partition, ...], mus: Tuple[Partition, ...], value: Scalar):
        m = len(lambdas)
        last = lambdas[-1]
        if m == spec.T:
            total = value * schur(last, spec.rho_minus[-1])
            if total != 0:
                out.append((PartitionSequence(lambdas, mus), total))
            return
        minus, plus = spec.rho_minus[m - 1], spec.rho_plus[m]
        for mu in _inner_shapes(last, len(minus)):
            down = skew_schur(last, mu, minus)
            if down == 0:
                continue
            for nxt in _outer_shapes(mu, len(plus), cutoff):
                up = skew_schur(nxt, mu, plus)
                if up != 0:
                    extend(lambdas + (nxt,), mus + (mu,), value * down * up)

    for first in _first_shapes(spec, cutoff):
        rho0 = spec.rho_plus[0]
        value = tau_pf(first, rho0) if spec.pfaffian_mode else schur(first, rho0)
        if value != 0:
            extend((first,), (), value)
    computation_logger.log_enumeration(
        "schur-sequences", len(out), time.perf_counter() - start
    )
    return tuple(out)


def _tail_mass(spec: SchurSpec, cutoff: int) -> float:
    """所有 |λ⁽ⁱ⁾| 超过截断的序列的权重模长之和的上界"""
    return float(abs(series_tail_bound(spec, spec.pfaffian_mode, SeriesTruncation(cutoff))))


def sequence_mass(spec: SchurSpec, cutoff: int) -> MassEstimate:
    """截断枚举的权重和与 Z (或 Z°) 的比较"""
    Z = spec.partition_function()
    total = Z * 0
    for _, w in enumerate_sequences(spec, cutoff):
        total = total + w
    return MassEstimate(total, Z, _tail_mass(spec, cutoff))


def brute_correlations(
    spec: SchurSpec,
    points: Sequence[SpacePoint],
    cutoff: int,
    tol: Optional[float] = None,
) -> CorrelationEstimate:
    """Σ 𝒲(λ,μ)/Z 对所有包含给定点的截断序列求和"""
    for p in points:
        if not 1 <= p.level <= spec.T:
            raise InputError(f"层号越界: {p}")
    Z = spec.partition_function()
    tail = _tail_mass(spec, cutoff) / abs(complex(Z))
    if tol is not None and tail > tol:
        exc = TailBoundError(f"截断 {cutoff} 的尾项上界 {tail:.3e} 超过容差 {tol:.3e}")
        error_logger.log_numeric_error("brute_correlations", exc, cutoff=cutoff)
        raise exc
    sequences = enumerate_sequences(spec, cutoff)
    total = Z * 0
    for seq, w in sequences:
        if contains_points(seq, points):
            total = total + w
    return CorrelationEstimate(total / Z, tail, len(sequences))


# ---------------------------------------------------------------- Toeplitz矩阵


def _majorant(rho: Specialization) -> Tuple[int, float]:
    moduli = [abs(complex(x)) for x in rho.variables if x != 0]
    return len(moduli), max(moduli, default=0.0)


def symbol_terms(rho_minus: Specialization, rho_plus: Specialization, a: int, b: int) -> int:
    """Σ_{k≥0} h_{k+a}(ρ⁻) h_{k+b}(ρ⁺) 需要的项数 K，使余项 Σ_{k≥K} 不超过 symbol_tolerance

    |h_k(ρ)| ≤ C(k+n−1, n−1)·m^k（n 为非零变量个数，m 为最大模长）；
    相邻两项的上界之比 r_k 随 k 单调下降，故余项不超过 t_K/(1 − r_K)。
    """
    n_minus, m_minus = _majorant(rho_minus)
    n_plus, m_plus = _majorant(rho_plus)
    # 一侧没有非零变量时 h_k = δ_{k0}，求和只有一项
    if n_minus == 0:
        return 1 if a == 0 else 0
    if n_plus == 0:
        return 1 if b == 0 else 0
    t = (
        comb(a + n_minus - 1, n_minus - 1) * m_minus**a
        * comb(b + n_plus - 1, n_plus - 1) * m_plus**b
    )
    for K in range(settings.symbol_max_terms + 1):
        r = (K + a + n_minus) / (K + a + 1) * (K + b + n_plus) / (K + b + 1) * m_minus * m_plus
        if r < 1 and t / (1 - r) <= settings.symbol_tolerance:
            return K
        t *= r
    exc = TailBoundError(
        f"符号系数在 {settings.symbol_max_terms} 项内余项仍大于 {settings.symbol_tolerance}"
    )
    error_logger.log_numeric_error("symbol_terms", exc, shift=(a, b))
    raise exc


@cached(key_prefix="schur_process.symbol_coefficient")
def symbol_coefficient(rho_minus: Specialization, rho_plus: Specialization, d: int) -> Scalar:
    """H(ρ⁻;z)H(ρ⁺;z⁻¹) 的 z^d 系数

    d ≥ 0 时为 Σ_{k≥0} h_{k+d}(ρ⁻) h_k(ρ⁺)，d < 0 时为 Σ_{k≥0} h_k(ρ⁻) h_{k−d}(ρ⁺)。
    求和在 symbol_terms 给出的项数处截断；任一侧没有非零变量时求和有限，结果精确。
    """
    a, b = max(d, 0), max(-d, 0)
    K = symbol_terms(rho_minus, rho_plus, a, b)
    hm = h_lookup(rho_minus, K + a)
    hp = h_lookup(rho_plus, K + b)
    total = hm(-1) * hp(-1)
    for k in range(K):
        total = total + hm(k + a) * hp(k + b)
    return total


def toeplitz_chain_entry(
    rho_minus: Specialization,
    rho_plus: Specialization,
    u: int,
    v: int,
    floor: Optional[int] = None,
) -> Scalar:
    """Σ_{m=floor}^{min(u,v)} h_{u−m}(ρ⁻) h_{v−m}(ρ⁺)

    floor 为 None 时对全部 m ≤ min(u,v) 求和，即符号系数 symbol_coefficient(ρ⁻, ρ⁺, u − v)。
    """
    if floor is None:
        return symbol_coefficient(rho_minus, rho_plus, u - v)
    top = min(u, v)
    hm = h_lookup(rho_minus, u - floor)
    hp = h_lookup(rho_plus, v - floor)
    total = hm(-1) * hp(-1)
    for m in range(floor, top + 1):
        total = total + hm(u - m) * hp(v - m)
    return total


def toeplitz_W(
    rho_minus: Specialization,
    rho_plus: Specialization,
    window: Window,
    floor: Optional[int] = None,
) -> np.ndarray:
    """窗口上的矩阵 W(u,v)

    默认 W(u,v) 为符号 H(ρ⁻;z)H(ρ⁺;z⁻¹) 的 z^{u−v} 系数，只依赖 u − v；
    给定 floor 时中间坐标从 floor 起求和，得到截断Schur过程的转移矩阵。
    """
    u_min, u_max = window
    positions = range(u_min, u_max + 1)
    return as_matrix(
        [[toeplitz_chain_entry(rho_minus, rho_plus, u, v, floor) for v in positions] for u in positions]
    )


def epsilon_toeplitz(rho: Specialization, window: Window, floor: Optional[int] = None) -> np.ndarray:
    """反对称矩阵 Σ_a (h_{u−a−1} h_{v−a} − h_{u−a} h_{v−a−1})

    默认对全部 a 求和，元素为 c(u−v−1) − c(u−v+1)，c 为 H(ρ;z)H(ρ;z⁻¹) 的系数，
    即符号 (z⁻¹ − z)H(ρ;z)H(ρ;z⁻¹) 的 z^{v−u} 系数；给定 floor 时 a 从 floor 起。
    """
    u_min, u_max = window
    positions = range(u_min, u_max + 1)
    if floor is None:

        def c(d: int) -> Scalar:
            return symbol_coefficient(rho, rho, d)

        return as_matrix([[c(u - v - 1) - c(u - v + 1) for v in positions] for u in positions])
    hk = h_lookup(rho, u_max - floor + 1)
    return as_matrix(
        [[pairing_entry(hk, u, v, floor, u_max) for v in positions] for u in positions]
    )


# ---------------------------------------------------------------- 围道与核


def kernel_contours(spec: SchurSpec, i: int, j: int, entry: str = "det") -> ContourConfig:
    """按半径规则选取围道

    ρ 取实际最大模长与 rho_floor 的较大者，R = (1 + 1/ρ)/2 > 1，r = (1 + ρ)/2 < 1。
    entry 为 "det"（行列式核）或 Pfaffian核的 "11"、"12"、"22"。
    """
    actual = spec.max_modulus
    if actual >= settings.rho_max:
        exc = ContourError(f"变量最大模长 {actual:.6g} 不小于 rho_max={settings.rho_max}")
        error_logger.log_numeric_error("kernel_contours", exc)
        raise exc
    rho = max(actual, settings.rho_floor)
    outside = (1 + 1 / rho) / 2
    inside = (1 + rho) / 2
    if entry == "det":
        r_z = r_w = outside if i <= j else inside
    elif entry == "11":
        r_z = r_w = outside
    elif entry == "12":
        r_z = outside
        r_w = outside if i >= j else 1 / (2 * outside)
    elif entry == "22":
        r_z = r_w = inside
    else:
        raise InputError(f"未知的核分量: {entry}")
    contours = ContourConfig(r_z, r_w)
    _check_kernel_poles(spec, contours, entry)
    return contours


def _check_kernel_poles(spec: SchurSpec, contours: ContourConfig, entry: str):
    moduli = [
        1 / abs(complex(x))
        for s in spec.rho_plus + spec.rho_minus
        for x in s.variables
        if x != 0
    ]
    unit = [1.0] if entry in ("11", "12") else []
    contours.check_poles(z_poles=moduli + unit, w_poles=moduli + (unit if entry == "11" else []))
    if abs(contours.r_z * contours.r_w - 1) < settings.pole_margin:
        raise ContourError(f"|zw| = {contours.r_z * contours.r_w:.6g} 过于接近极点 zw = 1")


def _integrand(spec: SchurSpec, entry: str, i: int, j: int):
    T = spec.T
    Mi, Mj = spec.minus_union(i, T + 1), spec.minus_union(j, T + 1)
    if entry == "det":
        Pi, Pj = spec.plus_union(0, i), spec.plus_union(0, j)

        def F(z, w):
            return (
                H_eval(Mi, z) * H_eval(Pj, w)
                / ((z * w - 1) * H_eval(Pi, 1 / z) * H_eval(Mj, 1 / w))
            )

        return F
    A = spec.minus_union(1, T + 1)
    Ai = union_all([A, spec.plus_union(0, i)])
    Aj = union_all([A, spec.plus_union(0, j)])
    if entry == "11":

        def F(z, w):
            return (
                (z - w) / ((z * z - 1) * (w * w - 1) * (z * w - 1))
                * H_eval(Mi, z) * H_eval(Mj, w)
                / (H_eval(Ai, 1 / z) * H_eval(Aj, 1 / w))
            )

    elif entry == "12":

        def F(z, w):
            return (
                (z - w) / ((z * z - 1) * (z * w - 1) * w)
                * H_eval(Mi, z) * H_eval(Aj, w)
                / (H_eval(Ai, 1 / z) * H_eval(Mj, 1 / w))
            )

    elif entry == "22":

        def F(z, w):
            return (
                (z - w) / (z * w * (1 - z * w))
                * H_eval(Ai, z) * H_eval(Aj, w)
                / (H_eval(Mi, 1 / z) * H_eval(Mj, 1 / w))
            )

    else:
        raise InputError(f"未知的核分量: {entry}")
    return F


@cached(key_prefix="schur_process.kernel_grid")
def _kernel_grid(spec: SchurSpec, entry: str, i: int, j: int, r_z: float, r_w: float, n: int):
    return laurent_grid(_integrand(spec, entry, i, j), ContourConfig(r_z, r_w, n), n)


def _coefficient(
    spec: SchurSpec,
    entry: str,
    i: int,
    j: int,
    p: int,
    q: int,
    contours: ContourConfig,
    tol: Optional[float],
) -> complex:
    for level in (i, j):
        if not 1 <= level <= spec.T:
            raise InputError(f"层号越界: {level}")
    result = laurent_coefficient(
        _integrand(spec, entry, i, j),
        contours,
        p,
        q,
        tol,
        build_grid=lambda n: _kernel_grid(spec, entry, i, j, contours.r_z, contours.r_w, n),
    )
    return result.value


def schur_kernel(
    spec: SchurSpec,
    i: int,
    u: int,
    j: int,
    v: int,
    contours: Optional[ContourConfig] = None,
    tol: Optional[float] = None,
) -> complex:
    """K(i,u;j,v)：被积函数在 z^u w^v 处的Laurent系数"""
    contours = contours or kernel_contours(spec, i, j, "det")
    return _coefficient(spec, "det", i, j, u, v, contours, tol)


def pf_kernel_entry(
    spec: SchurSpec,
    entry: str,
    i: int,
    u: int,
    j: int,
    v: int,
    contours: Optional[ContourConfig] = None,
    tol: Optional[float] = None,
) -> complex:
    """K₁₁、K₁₂ 或 K₂₂ 的单个值：z^{u−1} w^{v−1} 系数"""
    contours = contours or kernel_contours(spec, i, j, entry)
    return _coefficient(spec, entry, i, j, u - 1, v - 1, contours, tol)


def pf_schur_kernel(
    spec: SchurSpec, i: int, u: int, j: int, v: int, tol: Optional[float] = None
) -> np.ndarray:
    """2×2 块 [[K₁₁, K₁₂], [K₂₁, K₂₂]]，K₂₁(i,u;j,v) = −K₁₂(j,v;i,u)"""
    return np.array(
        [
            [
                pf_kernel_entry(spec, "11", i, u, j, v, tol=tol),
                pf_kernel_entry(spec, "12", i, u, j, v, tol=tol),
            ],
            [
                -pf_kernel_entry(spec, "12", j, v, i, u, tol=tol),
                pf_kernel_entry(spec, "22", i, u, j, v, tol=tol),
            ],
        ],
        dtype=complex,
    )


def assemble_kernel(
    spec: SchurSpec, points: Sequence[SpacePoint], tol: Optional[float] = None
) -> np.ndarray:
    """给定点上的 S×S 行列式核或 2S×2S Pfaffian核矩阵"""
    start = time.perf_counter()
    S = len(points)
    if spec.pfaffian_mode:
        K = np.zeros((2 * S, 2 * S), dtype=complex)
        for a, p in enumerate(points):
            for b, q in enumerate(points):
                K[2 * a : 2 * a + 2, 2 * b : 2 * b + 2] = pf_schur_kernel(
                    spec, p.level, p.u, q.level, q.u, tol
                )
    else:
        K = np.array(
            [[schur_kernel(spec, p.level, p.u, q.level, q.u, tol=tol) for q in points] for p in points],
            dtype=complex,
        ).reshape(S, S)
    computation_logger.log_kernel_built(
        "pfaffian-schur" if spec.pfaffian_mode else "schur", S, False, time.perf_counter() - start
    )
    return K


# ---------------------------------------------------------------- Eynard-Mehta 桥接


def em_bridge_spec(spec: SchurSpec, N: int, upper: int) -> EMSpec:
    """窗口 [−N, upper] 上截断的 Schur 过程，写成每层 N 个点的多层过程

    Φ(j, l) = h_{l+j}(ρ₀⁺)，Ψ(l, j) = h_{l+j}(ρ_T⁻)，W_m 为中间坐标从 −N 起求和的截断Toeplitz矩阵。
    层内第 a 个点对应位置 u = a − N。
    """
    if spec.pfaffian_mode:
        raise InputError("Eynard-Mehta 桥接只适用于行列式 Schur 过程")
    if N < 1 or upper < -N:
        raise WindowTooSmallError(f"窗口 [{-N}, {upper}] 无效")
    window = (-N, upper)
    positions = range(-N, upper + 1)
    h0 = h_lookup(spec.rho_plus[0], upper + N)
    hT = h_lookup(spec.rho_minus[-1], upper + N)
    Phi = as_matrix([[h0(l + j) for l in positions] for j in range(1, N + 1)], "Phi")
    Psi = as_matrix([[hT(l + j) for j in range(1, N + 1)] for l in positions], "Psi")
    Ws = [
        toeplitz_W(spec.rho_minus[m - 1], spec.rho_plus[m], window, floor=-N)
        for m in range(1, spec.T)
    ]
    levels = [
        GroundSet(tuple(SpacePoint(i, u) for u in positions)) for i in range(1, spec.T + 1)
    ]
    return EMSpec(levels, N, Phi, Ws, Psi)


def bridge_index(spec_em: EMSpec, point: SpacePoint) -> int:
    """SpacePoint 在桥接 EMSpec 基础集中的全局下标"""
    offset = sum(spec_em.sizes[: point.level - 1])
    return offset + point.u + spec_em.n
