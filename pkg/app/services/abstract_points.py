"""
抽象行列式/Pfaffian点服务
(ℂ²)^⊗n 中的张量点、核见证、GL₂^n ⋊ S_n 作用、翻转核构造以及四因子显式核。
因子 j（从1计数）对应位掩码的第 j−1 位。
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.exceptions import (
    DegenerateRootError,
    DimensionMismatchError,
    IndexRangeError,
    InputError,
    SingularActionError,
    SupportFormError,
    ZeroPointError,
)
from app.core.logging import computation_logger, error_logger
from app.services.point_process import Config, ProbTable, pf_coords
from app.utils.linalg import (
    Scalar,
    as_matrix,
    close,
    det,
    is_exact,
    pfaffian,
    require_square,
    submatrix,
)

GL2 = Sequence[Sequence[Scalar]]


@dataclass(frozen=True)
class TensorPoint:
    """张量点：coeffs[mask] 为子集 S 的坐标 p_S"""

    n: int
    coeffs: Tuple[Scalar, ...]

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if len(coeffs) != 1 << self.n:
            raise DimensionMismatchError("coeffs", 1 << self.n, len(coeffs))
        if all(c == 0 for c in coeffs):
            raise ZeroPointError("张量点不能恒为零")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_dict(cls, n: int, values: Dict[int, Scalar]) -> "TensorPoint":
        zero = Fraction(0)
        return cls(n, tuple(values.get(mask, zero) for mask in range(1 << n)))

    def coeff(self, mask: int) -> Scalar:
        return self.coeffs[mask]

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)


@dataclass
class KernelWitness:
    """核见证：p_S = det K_{S∪{n+1..n+m}} 或 pf K_{S∪{n+1..n+m}}"""

    n: int
    m: int
    K: np.ndarray
    pfaffian_mode: bool = False

    def __post_init__(self):
        size = require_square(self.K, "K")
        expected = (self.n + self.m) * (2 if self.pfaffian_mode else 1)
        if size != expected:
            raise DimensionMismatchError("K", expected, size)


@dataclass(frozen=True)
class RootCandidate:
    """四因子显式核的一个候选根"""

    x: Scalar
    witness: Optional[KernelWitness]
    reproduces: bool


# ---------------------------------------------------------------- 点与见证


def point_from_kernel(w: KernelWitness) -> TensorPoint:
    virtual = list(range(w.n, w.n + w.m))
    coeffs = []
    for mask in range(1 << w.n):
        idx = [i for i in range(w.n) if mask >> i & 1] + virtual
        if w.pfaffian_mode:
            coords = pf_coords(idx)
            coeffs.append(pfaffian(submatrix(w.K, coords, coords)))
        else:
            coeffs.append(det(submatrix(w.K, idx, idx)))
    try:
        return TensorPoint(w.n, tuple(coeffs))
    except ZeroPointError as exc:
        error_logger.log_numeric_error("point_from_kernel", exc, n=w.n, m=w.m)
        raise


def _as_gl2(g: GL2) -> Tuple[Scalar, Scalar, Scalar, Scalar]:
    M = as_matrix(g, "g")
    if M.shape != (2, 2):
        raise DimensionMismatchError("g", (2, 2), M.shape)
    a, b, c, d = M[0, 0], M[0, 1], M[1, 0], M[1, 1]
    if a * d - b * c == 0:
        raise SingularActionError(f"作用矩阵奇异: {g}")
    return a, b, c, d


def _check_factor(j: int, n: int):
    if not 1 <= j <= n:
        raise IndexRangeError(f"张量因子 {j} 越界 (n={n})")


def gl2_act(j: int, g: GL2, p: TensorPoint) -> TensorPoint:
    """(g·p)_S = a p_S + b p_{S∪j}，(g·p)_{S∪j} = c p_S + d p_{S∪j}（j ∉ S）"""
    _check_factor(j, p.n)
    a, b, c, d = _as_gl2(g)
    bit = 1 << (j - 1)
    out = list(p.coeffs)
    for mask in range(1 << p.n):
        if mask & bit:
            continue
        lo, hi = p.coeffs[mask], p.coeffs[mask | bit]
        out[mask] = a * lo + b * hi
        out[mask | bit] = c * lo + d * hi
    return TensorPoint(p.n, tuple(out))


def correlation_transform(p: TensorPoint) -> TensorPoint:
    """每个因子作用 [[1,1],[0,1]]：p_S ↦ Σ_{T⊇S} p_T"""
    for j in range(1, p.n + 1):
        p = gl2_act(j, [[1, 1], [0, 1]], p)
    return p


def tensor_point_from_table(T: ProbTable) -> TensorPoint:
    n = T.ground.size
    return TensorPoint(n, tuple(T.prob(Config(mask, n)) for mask in range(1 << n)))


def _check_permutation(sigma: Sequence[int], n: int) -> Tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise IndexRangeError(f"不是 {{1..{n}}} 上的置换: {sigma}")
    return sigma


def _image_mask(sigma: Tuple[int, ...], mask: int) -> int:
    out = 0
    for i, target in enumerate(sigma):
        if mask >> i & 1:
            out |= 1 << (target - 1)
    return out


def permute(sigma: Sequence[int], p: TensorPoint) -> TensorPoint:
    """(σ·p)_{σ(S)} = p_S，sigma[i−1] 为 i 的像"""
    sigma = _check_permutation(sigma, p.n)
    out = [p.coeffs[0]] * (1 << p.n)
    for mask in range(1 << p.n):
        out[_image_mask(sigma, mask)] = p.coeffs[mask]
    return TensorPoint(p.n, tuple(out))


def permute_witness(sigma: Sequence[int], w: KernelWitness) -> KernelWitness:
    """同时置换行列（Pfaffian模式下置换 2×2 块），虚拟点保持不动"""
    sigma = _check_permutation(sigma, w.n)
    order = [0] * w.n
    for i, target in enumerate(sigma):
        order[target - 1] = i
    order += list(range(w.n, w.n + w.m))
    if w.pfaffian_mode:
        order = pf_coords(order)
    return KernelWitness(w.n, w.m, submatrix(w.K, order, order), w.pfaffian_mode)


def _transposition(j: int, n: int) -> List[int]:
    sigma = list(range(1, n + 1))
    sigma[0], sigma[j - 1] = sigma[j - 1], sigma[0]
    return sigma


def flip_kernel(w: KernelWitness) -> KernelWitness:
    """因子1上作用 [[0,1],[1,0]] 后的见证，阶数 n+m+1

    新矩阵第0行只有末列为 1，第0列只有末行为 −1；末行/末列为原矩阵的第0行/第0列，
    中间块为原矩阵去掉第0行第0列。
    """
    if w.pfaffian_mode:
        raise InputError("翻转核只对行列式见证实现")
    if w.n < 1:
        raise IndexRangeError("翻转需要至少一个张量因子")
    K = w.K
    size = K.shape[0]
    exact = is_exact(K)
    one = Fraction(1) if exact else 1.0
    out = np.full((size + 1, size + 1), one - one, dtype=K.dtype)
    out[1:size, 1:size] = K[1:, 1:]
    out[size, 1:size] = K[0, 1:]
    out[1:size, size] = K[1:, 0]
    out[size, size] = K[0, 0]
    out[0, size] = one
    out[size, 0] = -one
    return KernelWitness(w.n, w.m + 1, out)


def _scale_first(w: KernelWitness, t: Scalar) -> KernelWitness:
    K = w.K.copy()
    K[0, :] = K[0, :] * t
    return KernelWitness(w.n, w.m, K)


def _shift_first(w: KernelWitness, c: Scalar) -> KernelWitness:
    K = w.K.copy()
    K[0, 0] = K[0, 0] + c
    return KernelWitness(w.n, w.m, K)


def _lower_on_first(w: KernelWitness, a: Scalar, c: Scalar, d: Scalar) -> KernelWitness:
    # [[a,0],[c,d]] = [[1,0],[c/a,1]]·diag(a,d)，对角部分只确定到整体倍数
    w = _scale_first(w, d / a)
    return _shift_first(w, c / a)


def act_on_witness(j: int, g: GL2, w: KernelWitness) -> KernelWitness:
    """为 g 在因子 j 上作用后的点构造见证（射影意义下相等）

    b = 0 时分解为对角与下三角幺幂；否则 g = [[1,0],[d/b,1]]·[[0,1],[1,0]]·[[−det/b,0],[a,b]]。
    """
    if w.pfaffian_mode:
        raise InputError("只对行列式见证构造 GL₂ 作用")
    _check_factor(j, w.n)
    a, b, c, d = _as_gl2(g)
    swap = _transposition(j, w.n)
    if j != 1:
        w = permute_witness(swap, w)
    if b == 0:
        w = _lower_on_first(w, a, c, d)
    else:
        determinant = a * d - b * c
        w = _lower_on_first(w, -determinant / b, a, b)
        w = flip_kernel(w)
        w = _shift_first(w, d / b)
    if j != 1:
        w = permute_witness(swap, w)
    computation_logger.debug("Witness transformed", factor=j, n=w.n, m=w.m)
    return w


# ---------------------------------------------------------------- 射影比较


def normalized(p: TensorPoint) -> TensorPoint:
    """除以按掩码顺序的第一个非零坐标"""
    lead = next(c for c in p.coeffs if c != 0)
    return TensorPoint(p.n, tuple(c / lead for c in p.coeffs))


def projectively_equal(p: TensorPoint, q: TensorPoint, tol: Optional[float] = None) -> bool:
    """精确点精确比较；否则按 tol（默认 1e-12）比较归一化坐标"""
    if p.n != q.n:
        return False
    a, b = normalized(p), normalized(q)
    if tol is None and p.exact and q.exact:
        return a.coeffs == b.coeffs
    tol = 1e-12 if tol is None else tol
    return all(close(x, y, tol) for x, y in zip(a.coeffs, b.coeffs))


# ---------------------------------------------------------------- 四因子显式核

_SUPPORT = {0b0000, 0b1111, 0b0101, 0b1001, 0b0110, 0b1010}
P13, P14, P23, P24, P1234 = 0b0101, 0b1001, 0b0110, 0b1010, 0b1111


def _exact_sqrt(value: Fraction) -> Optional[Fraction]:
    if value < 0:
        return None
    num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None


def _quadratic_roots(B: Scalar, C: Scalar) -> List[Scalar]:
    """x² − Bx + C = 0 的两个根（判别式为有理平方时保持精确）"""
    disc = B * B - 4 * C
    if isinstance(disc, Fraction):
        root = _exact_sqrt(disc)
        if root is not None:
            return [(B + root) / 2, (B - root) / 2]
    root = np.sqrt(complex(disc))
    return [(complex(B) + root) / 2, (complex(B) - root) / 2]


def _reduced_form(p: TensorPoint) -> TensorPoint:
    if p.n != 4:
        raise SupportFormError(f"需要 n = 4 的张量点, 实际 n = {p.n}")
    outside = [mask for mask in range(16) if mask not in _SUPPORT and p.coeffs[mask] != 0]
    if outside:
        raise SupportFormError(f"支撑集超出 ∅、{{1,2,3,4}}、13、14、23、24: {outside}")
    if p.coeffs[0] == 0:
        raise SupportFormError("p_∅ 必须非零")
    lead = p.coeffs[0]
    return TensorPoint(4, tuple(c / lead for c in p.coeffs))


def four_factor_kernel_for_root(p: TensorPoint, x: Scalar) -> Optional[KernelWitness]:
    """给定根 x 的 4×4 核；x = 0 且 p₂₃ ≠ 0 时不存在"""
    q = _reduced_form(p)
    p13, p14, p23, p24 = (q.coeffs[m] for m in (P13, P14, P23, P24))
    if x == 0:
        if p23 != 0:
            return None
        middle = p23 - p23
    else:
        middle = -p23 / x
    zero = p13 - p13
    one = zero + 1
    K = as_matrix(
        [
            [zero, zero, one, -p14],
            [zero, zero, middle, one],
            [-p13, x, zero, zero],
            [one, -p24, zero, zero],
        ],
        "K",
    )
    return KernelWitness(4, 0, K)


def four_factor_candidates(p: TensorPoint, tol: float = 1e-10) -> List[RootCandidate]:
    """两个根（模长大的在前）及各自是否重现 p"""
    q = _reduced_form(p)
    p13, p14, p23, p24, p1234 = (q.coeffs[m] for m in (P13, P14, P23, P24, P1234))
    B = p13 * p24 + p14 * p23 - p1234
    C = p13 * p14 * p23 * p24
    roots = sorted(_quadratic_roots(B, C), key=lambda r: -abs(complex(r)))
    out = []
    for x in roots:
        witness = four_factor_kernel_for_root(q, x)
        ok = False
        if witness is not None:
            image = point_from_kernel(witness)
            if q.exact and image.exact:
                ok = image.coeffs == q.coeffs
            else:
                ok = all(close(a, b, tol) for a, b in zip(image.coeffs, q.coeffs))
        out.append(RootCandidate(x, witness, ok))
    return out


def four_factor_kernel(p: TensorPoint, tol: float = 1e-10) -> KernelWitness:
    """首选模长较大的根，不能重现时退到另一个根"""
    for candidate in four_factor_candidates(p, tol):
        if candidate.reproduces:
            return candidate.witness
    exc = DegenerateRootError("二次方程的两个根都不能给出重现 p 的核")
    error_logger.log_numeric_error("four_factor_kernel", exc)
    raise exc
