"""
对称函数服务
分拆、有限变量特殊化、完全齐次函数 h_k、Jacobi-Trudi 形式的(斜)Schur函数、
τ_λ 的直接求和与 Pfaffian 公式、Cauchy 型恒等式以及 Schur 过程的配分函数。
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from types import SimpleNamespace
from typing import Callable, Iterator, List, Optional, Protocol, Sequence, Tuple

import numpy as np

from app.core.config import get_settings
from app.core.exceptions import DivergenceError, InputError
from app.utils.cache_manager import cached
from app.utils.linalg import Scalar, as_matrix, det, pfaffian

settings = get_settings()


@dataclass(frozen=True)
class Partition:
    """分拆：严格正的弱递减整数元组"""

    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p < 0 for p in parts):
            raise InputError(f"分拆的部分必须非负: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise InputError(f"分拆必须弱递减: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def part(self, i: int) -> int:
        """第 i 个部分（从1计数），超出长度为0"""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(
            tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0]))
        )

    def shifted(self, n: int) -> Tuple[int, ...]:
        """坐标 l_i = λ_i − i, i = 1..n"""
        return tuple(self.part(i) - i for i in range(1, n + 1))

    def contains(self, other: "Partition") -> bool:
        """Young图包含关系 other ⊆ self"""
        if other.length > self.length:
            return False
        return all(self.part(i) >= other.part(i) for i in range(1, other.length + 1))

    def has_even_conjugate(self) -> bool:
        return all(c % 2 == 0 for c in self.conjugate().parts)

    def __iter__(self):
        return iter(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"


EMPTY = Partition()


@dataclass(frozen=True)
class Specialization:
    """有限变量特殊化 ρ = (x_1, …, x_k)

    kinds 记录每个变量的类型，使精确值与相同大小的浮点值在缓存键中区分开。
    """

    variables: Tuple[Scalar, ...] = ()
    kinds: Tuple[str, ...] = field(init=False, repr=False)

    def __post_init__(self):
        values = tuple(
            Fraction(x) if isinstance(x, Rational) else x for x in self.variables
        )
        object.__setattr__(self, "variables", values)
        object.__setattr__(self, "kinds", tuple(type(x).__name__ for x in values))

    @classmethod
    def of(cls, *variables: Scalar) -> "Specialization":
        return cls(tuple(variables))

    @property
    def is_empty(self) -> bool:
        return not self.variables

    @property
    def is_exact(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.variables)

    @property
    def max_modulus(self) -> float:
        return max((abs(complex(x)) for x in self.variables), default=0.0)

    def power_sum(self, k: int) -> Scalar:
        return sum((x**k for x in self.variables), Fraction(0))

    def absolute(self) -> "Specialization":
        """变量取模长（精确值保持精确）"""
        return Specialization(
            tuple(abs(x) if isinstance(x, Fraction) else abs(complex(x)) for x in self.variables)
        )

    def __len__(self) -> int:
        return len(self.variables)


@dataclass(frozen=True)
class SeriesTruncation:
    """形式级数截断次数"""

    max_degree: int

    def __post_init__(self):
        if self.max_degree < 0:
            raise InputError("截断次数必须非负")


class SpecializationChain(Protocol):
    """Schur 过程的特殊化链：ρ₀⁺…ρ_{T−1}⁺ 与 ρ₁⁻…ρ_T⁻"""

    T: int
    rho_plus: Tuple[Specialization, ...]
    rho_minus: Tuple[Specialization, ...]


# ---------------------------------------------------------------- 分拆枚举


def partitions_of(n: int, max_part: Optional[int] = None) -> Iterator[Partition]:
    """n 的全部分拆，按字典序从大到小"""
    max_part = n if max_part is None else max_part

    def rec(remaining: int, bound: int) -> Iterator[Tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, bound), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest

    for parts in rec(n, max_part):
        yield Partition(parts)


def partitions_up_to(size: int) -> Iterator[Partition]:
    """|λ| ≤ size 的全部分拆，先按大小再按字典序"""
    for n in range(size + 1):
        yield from partitions_of(n)


def subpartitions(la: Partition) -> Iterator[Partition]:
    """λ 包含的全部分拆 κ ⊆ λ"""

    def rec(i: int, bound: int) -> Iterator[Tuple[int, ...]]:
        if i > la.length:
            yield ()
            return
        for p in range(min(bound, la.part(i)), -1, -1):
            if p == 0:
                yield ()
            else:
                for rest in rec(i + 1, p):
                    yield (p,) + rest

    for parts in rec(1, la.part(1)):
        yield Partition(parts)


# ---------------------------------------------------------------- h 值


def _zero_one(rho: Specialization) -> Tuple[Scalar, Scalar]:
    if rho.is_exact:
        return Fraction(0), Fraction(1)
    return 0.0, 1.0


@cached(key_prefix="symfunc.h_values")
def h_values(rho: Specialization, d: int) -> Tuple[Scalar, ...]:
    """h_0 … h_d：逐个变量乘以 (1 − x z)⁻¹ 的级数展开"""
    if d < 0:
        raise InputError("次数必须非负")
    zero, one = _zero_one(rho)
    values = [one] + [zero] * d
    for x in rho.variables:
        for k in range(1, d + 1):
            values[k] = values[k] + x * values[k - 1]
    return tuple(values)


def h(rho: Specialization, k: int) -> Scalar:
    """单个 h_k，约定 h_k = 0 (k < 0)"""
    if k < 0:
        return _zero_one(rho)[0]
    return h_values(rho, k)[k]


def h_lookup(rho: Specialization, d: int) -> Callable[[int], Scalar]:
    """返回下标函数 k ↦ h_k（k 超出 [0, d] 时为0）"""
    table = h_values(rho, max(d, 0))
    zero = _zero_one(rho)[0]

    def lookup(k: int) -> Scalar:
        return table[k] if 0 <= k <= d else zero

    return lookup


def union_spec(r1: Specialization, r2: Specialization) -> Specialization:
    """特殊化的并：变量列表拼接，幂和相加"""
    return Specialization(r1.variables + r2.variables)


def union_all(specs: Sequence[Specialization]) -> Specialization:
    out = Specialization()
    for s in specs:
        out = union_spec(out, s)
    return out


def H_eval(rho: Specialization, z: np.ndarray) -> np.ndarray:
    """数值求值 H(ρ; z) = Π (1 − x z)⁻¹，z 可为数组"""
    out = np.ones_like(z, dtype=complex)
    for x in rho.variables:
        out = out / (1 - complex(x) * z)
    return out


# ---------------------------------------------------------------- Schur 函数


def skew_schur(
    la: Partition, mu: Partition, rho: Specialization, N: Optional[int] = None
) -> Scalar:
    """Jacobi-Trudi：s_{λ/μ} = det[h_{l_i − m_j}]，N ≥ max(l(λ), l(μ))"""
    zero, one = _zero_one(rho)
    if not la.contains(mu):
        return zero
    N = max(la.length, mu.length) if N is None else N
    if N < max(la.length, mu.length):
        raise InputError("Jacobi-Trudi 的阶数不足")
    if N == 0:
        return one
    l = la.shifted(N)
    m = mu.shifted(N)
    hk = h_lookup(rho, max(0, max(l) - min(m)))
    grid = [[hk(l[i] - m[j]) for j in range(N)] for i in range(N)]
    return det(as_matrix(grid))


def schur(la: Partition, rho: Specialization) -> Scalar:
    return skew_schur(la, EMPTY, rho)


def tableau_schur(la: Partition, mu: Partition, rho: Specialization) -> Scalar:
    """半标准杨表求和的慢速参照实现

    按分支规则逐个变量加入水平带：s_{λ/μ}(x_1..x_k) = Σ Π x_i^{|ν_i/ν_{i−1}|}。
    """
    zero, one = _zero_one(rho)
    if not la.contains(mu):
        return zero
    k = len(rho)
    if k == 0:
        return one if la == mu else zero

    def strips(cur: Partition) -> Iterator[Partition]:
        # ν/cur 为水平带且 ν ⊆ λ：cur_i ≤ ν_i ≤ min(λ_i, cur_{i−1})
        rows = la.length

        def rec(i: int) -> Iterator[Tuple[int, ...]]:
            if i > rows:
                yield ()
                return
            upper = la.part(i) if i == 1 else min(la.part(i), cur.part(i - 1))
            for p in range(cur.part(i), upper + 1):
                for rest in rec(i + 1):
                    yield (p,) + rest

        for parts in rec(1):
            if all(a >= b for a, b in zip(parts, parts[1:])):
                yield Partition(parts)

    total = zero
    frontier = [(mu, one)]
    for idx, x in enumerate(rho.variables):
        last = idx == k - 1
        nxt = []
        for cur, w in frontier:
            for nu in strips(cur):
                if last and nu != la:
                    continue
                nxt.append((nu, w * x ** (nu.size - cur.size)))
        frontier = nxt
    for _, w in frontier:
        total = total + w
    return total


# ---------------------------------------------------------------- τ 函数


def tau_direct(la: Partition, rho: Specialization) -> Scalar:
    """τ_λ = Σ_{κ ⊆ λ, κ′ 偶} s_{λ/κ}"""
    total = _zero_one(rho)[0]
    for ka in subpartitions(la):
        if ka.has_even_conjugate():
            total = total + skew_schur(la, ka, rho)
    return total


def pairing_entry(
    hk: Callable[[int], Scalar], u: int, v: int, a_min: int, a_max: int
) -> Scalar:
    """双线性项 Σ_{a=a_min}^{a_max} (h_{u−a−1} h_{v−a} − h_{u−a} h_{v−a−1})"""
    total = hk(-1)
    for a in range(a_min, a_max + 1):
        total = total + hk(u - a - 1) * hk(v - a) - hk(u - a) * hk(v - a - 1)
    return total


def tau_pf(la: Partition, rho: Specialization, two_n: Optional[int] = None) -> Scalar:
    """τ_λ 的 Pfaffian 公式

    l_i = λ_i − i (i = 1..2N)，a 取遍 [−2N, max l_i]（κ 至多 2N 行）。
    """
    two_n = la.length + la.length % 2 if two_n is None else two_n
    if two_n % 2 or two_n < la.length:
        raise InputError(f"填充大小必须为不小于 l(λ) 的偶数: {two_n}")
    _, one = _zero_one(rho)
    if two_n == 0:
        return one
    l = la.shifted(two_n)
    a_max = max(l)
    hk = h_lookup(rho, a_max + two_n + 1)
    grid = [
        [pairing_entry(hk, l[i], l[j], -two_n, a_max) for j in range(two_n)]
        for i in range(two_n)
    ]
    return pfaffian(as_matrix(grid))


def even_conjugate_indicator(ka: Partition, N: int) -> Fraction:
    """pf[δ_{k_i−1, k_j} − δ_{k_i, k_j−1}]，k_i = κ_i − i, 矩阵阶为 2N"""
    if ka.length > 2 * N:
        raise InputError("需要 l(κ) ≤ 2N")
    if N == 0:
        return Fraction(1)
    k = ka.shifted(2 * N)
    grid = [
        [int(k[i] - 1 == k[j]) - int(k[i] == k[j] - 1) for j in range(2 * N)]
        for i in range(2 * N)
    ]
    return pfaffian(as_matrix(grid))


# ---------------------------------------------------------------- Cauchy 型恒等式


def _pair_factor(x: Scalar, y: Scalar) -> Scalar:
    prod = x * y
    if abs(complex(prod)) >= 1:
        raise DivergenceError(f"乘积发散: |{x}·{y}| ≥ 1")
    return 1 / (1 - prod)


def _one(*specs: Specialization) -> Scalar:
    return Fraction(1) if all(s.is_exact for s in specs) else 1.0


def cauchy_H(r1: Specialization, r2: Specialization) -> Scalar:
    """H(x; y) = Π_{i,j} (1 − x_i y_j)⁻¹"""
    value = _one(r1, r2)
    for x in r1.variables:
        for y in r2.variables:
            value = value * _pair_factor(x, y)
    return value


def cauchy_series(r1: Specialization, r2: Specialization, trunc: SeriesTruncation) -> Scalar:
    """Σ_{|λ| ≤ d} s_λ(r1) s_λ(r2)"""
    total = _one(r1, r2) - _one(r1, r2)
    for la in partitions_up_to(trunc.max_degree):
        if la.length > min(len(r1), len(r2)):
            continue
        total = total + schur(la, r1) * schur(la, r2)
    return total


def cauchy_tail_bound(r1: Specialization, r2: Specialization, d: int) -> float:
    """几何尾项上界 s^{d+1}/(1−s)，s = Σ|x|·Σ|y|"""
    s = sum(abs(complex(x)) for x in r1.variables) * sum(
        abs(complex(y)) for y in r2.variables
    )
    if s >= 1:
        raise DivergenceError(f"尾项上界要求 Σ|x|·Σ|y| < 1, 实际 {s}")
    return s ** (d + 1) / (1 - s)


def h_o(rho: Specialization) -> Scalar:
    """H°(x) = Π_{i<j} (1 − x_i x_j)⁻¹"""
    value = _one(rho)
    for x, y in combinations(rho.variables, 2):
        value = value * _pair_factor(x, y)
    return value


def h_o_series(rho: Specialization, trunc: SeriesTruncation) -> Scalar:
    """Σ_{|λ| ≤ d, λ′ 偶} s_λ(ρ)"""
    total = _one(rho) - _one(rho)
    for la in partitions_up_to(trunc.max_degree):
        if la.length <= len(rho) and la.has_even_conjugate():
            total = total + schur(la, rho)
    return total


def h_o_tail_bound(rho: Specialization, d: int) -> float:
    """尾项上界 e^{⌊d/2⌋+1}/(1−e)，e = Σ_{i<j}|x_i x_j|"""
    e = sum(abs(complex(x) * complex(y)) for x, y in combinations(rho.variables, 2))
    if e >= 1:
        raise DivergenceError(f"尾项上界要求 Σ|x_i x_j| < 1, 实际 {e}")
    return e ** (d // 2 + 1) / (1 - e)


# ---------------------------------------------------------------- 配分函数


def schur_Z(chain: SpecializationChain) -> Scalar:
    """Z(ρ) = Π_{0≤i<j≤T} H(ρ_i⁺; ρ_j⁻)"""
    value = _one(*chain.rho_plus, *chain.rho_minus)
    for i in range(chain.T):
        for j in range(i + 1, chain.T + 1):
            value = value * cauchy_H(chain.rho_plus[i], chain.rho_minus[j - 1])
    return value


def pf_Z(chain: SpecializationChain) -> Scalar:
    """Z°(ρ) = H°(ρ⁻_{[1,T]}) · Z(ρ)"""
    return h_o(union_all(chain.rho_minus)) * schur_Z(chain)


def _geometric_series(c: Scalar, step: int, degree: int, zero: Scalar, one: Scalar) -> List[Scalar]:
    """1/(1 − c t^step) 截断到 degree"""
    out = [zero] * (degree + 1)
    k = 0
    while k * step <= degree:
        out[k * step] = c**k if k else one
        k += 1
    return out


def _series_mul(a: List[Scalar], b: List[Scalar]) -> List[Scalar]:
    degree = len(a) - 1
    out = [a[0] - a[0]] * (degree + 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j in range(degree + 1 - i):
            out[i + j] = out[i + j] + x * b[j]
    return out


def degree_series(
    chain: SpecializationChain, pfaffian_mode: bool, trunc: SeriesTruncation
) -> List[Scalar]:
    """所有变量取模长并乘以 t 后配分函数的 t 幂级数系数（至 max_degree 次）

    每个成对因子 (1 − |x||y| t²)⁻¹ 是非负系数级数，用于严格的截断尾项估计。
    """
    absolute_plus = [s.absolute() for s in chain.rho_plus]
    absolute_minus = [s.absolute() for s in chain.rho_minus]
    exact = all(s.is_exact for s in absolute_plus + absolute_minus)
    zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
    series = [one] + [zero] * trunc.max_degree
    pairs = []
    for i in range(chain.T):
        for j in range(i + 1, chain.T + 1):
            pairs.extend(
                x * y
                for x in absolute_plus[i].variables
                for y in absolute_minus[j - 1].variables
            )
    if pfaffian_mode:
        pairs.extend(x * y for x, y in combinations(union_all(absolute_minus).variables, 2))
    for c in pairs:
        series = _series_mul(series, _geometric_series(c, 2, trunc.max_degree, zero, one))
    return series


def series_tail_bound(
    chain: SpecializationChain, pfaffian_mode: bool, trunc: SeriesTruncation
) -> Scalar:
    """Z(|ρ|) 减去截断级数：所有 |λ⁽ⁱ⁾| 超过截断次数的序列的质量上界"""

    absolute = SimpleNamespace(
        T=chain.T,
        rho_plus=tuple(s.absolute() for s in chain.rho_plus),
        rho_minus=tuple(s.absolute() for s in chain.rho_minus),
    )
    total = pf_Z(absolute) if pfaffian_mode else schur_Z(absolute)
    tail = total - sum(degree_series(chain, pfaffian_mode, trunc))
    return max(tail, tail - tail)
