"""
通用稠密线性代数
在两种标量后端上提供行列式、逆矩阵、Pfaffian、分块求逆与主子式：
  - 精确后端：dtype=object 的 numpy 数组，元素为 Fraction
  - 浮点后端：float64 / complex128 的 numpy 数组
"""
from fractions import Fraction
from numbers import Complex, Rational
from typing import Any, Iterable, NamedTuple, Sequence, Tuple, Union

import numpy as np

from app.core.config import get_settings
from app.core.exceptions import (
    DimensionMismatchError,
    IndexRangeError,
    NotSkewSymmetricError,
    NotSquareError,
    SingularMatrixError,
)

settings = get_settings()

Scalar = Union[Fraction, int, float, complex]
SubsetIndex = Tuple[int, ...]


class BlockInverse(NamedTuple):
    """分块逆矩阵的四个块"""

    top_left: np.ndarray
    top_right: np.ndarray
    bottom_left: np.ndarray
    bottom_right: np.ndarray


def _is_rational(x: Any) -> bool:
    return isinstance(x, Rational)


def as_matrix(data: Any, name: str = "A") -> np.ndarray:
    """将嵌套列表或数组转换为矩阵

    全部元素为整数或 Fraction 时返回精确矩阵，否则返回浮点矩阵。
    """
    if isinstance(data, np.ndarray) and data.ndim == 2:
        if data.dtype == object:
            if all(_is_rational(x) for x in data.flat):
                return _coerce_exact(data)
            return _coerce_float(data)
        if data.dtype.kind in "iub":
            return _coerce_exact(data.astype(object))
        return data
    rows = [list(r) for r in data]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise DimensionMismatchError(name, "矩形数组", [len(r) for r in rows])
    ncols = len(rows[0]) if rows else 0
    grid = np.empty((len(rows), ncols), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            grid[i, j] = x
    if all(_is_rational(x) for x in grid.flat):
        return _coerce_exact(grid)
    return _coerce_float(grid)


def _coerce_exact(grid: np.ndarray) -> np.ndarray:
    out = np.empty(grid.shape, dtype=object)
    for idx, x in np.ndenumerate(grid):
        out[idx] = Fraction(x)
    return out


def _coerce_float(grid: np.ndarray) -> np.ndarray:
    values = [complex(x) for x in grid.flat]
    if all(v.imag == 0 for v in values):
        return np.array([v.real for v in values], dtype=float).reshape(grid.shape)
    return np.array(values, dtype=complex).reshape(grid.shape)


def is_exact(A: np.ndarray) -> bool:
    """是否为精确有理矩阵"""
    return A.dtype == object


def zeros(rows: int, cols: int, exact: bool = True) -> np.ndarray:
    if exact:
        return np.full((rows, cols), Fraction(0), dtype=object)
    return np.zeros((rows, cols))


def identity(n: int, exact: bool = True) -> np.ndarray:
    out = zeros(n, n, exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def to_exact(A: np.ndarray) -> np.ndarray:
    """浮点矩阵转为精确矩阵（按二进制值精确转换）"""
    if is_exact(A):
        return A
    if np.iscomplexobj(A) and np.any(A.imag != 0):
        raise DimensionMismatchError("A", "实数矩阵", "复数矩阵")
    return _coerce_exact(np.real(A).astype(object))


def to_float(A: np.ndarray) -> np.ndarray:
    """精确矩阵转为浮点矩阵"""
    if not is_exact(A):
        return A
    return np.array([[float(x) for x in row] for row in A], dtype=float).reshape(
        A.shape
    )


def require_square(A: np.ndarray, name: str = "A") -> int:
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotSquareError(name, "方阵", A.shape)
    return A.shape[0]


def is_skew(A: np.ndarray, tol: float = None) -> bool:
    """检查反对称性：精确矩阵精确比较，浮点矩阵按相对容差"""
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    if is_exact(A):
        n = A.shape[0]
        return all(A[i, j] == -A[j, i] for i in range(n) for j in range(i, n))
    tol = settings.float_tolerance if tol is None else tol
    scale = max(1.0, float(np.max(np.abs(A))) if A.size else 0.0)
    return bool(np.all(np.abs(A + A.T) <= tol * scale))


def as_skew(data: Any, name: str = "A", tol: float = None) -> np.ndarray:
    """构造并校验反对称矩阵"""
    A = as_matrix(data, name)
    require_square(A, name)
    if not is_skew(A, tol):
        raise NotSkewSymmetricError(name)
    return A


def subset_index(indices: Iterable[int], dim: int) -> SubsetIndex:
    """校验下标集合：严格递增且位于 [0, dim)"""
    idx = tuple(int(i) for i in indices)
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise IndexRangeError(f"下标必须严格递增: {idx}")
    if idx and (idx[0] < 0 or idx[-1] >= dim):
        raise IndexRangeError(f"下标越界: {idx}, 维数 {dim}")
    return idx


def submatrix(A: np.ndarray, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    return A[np.ix_(list(rows), list(cols))]


def _bareiss_det(A: np.ndarray) -> Fraction:
    n = A.shape[0]
    M = [list(row) for row in A]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) / prev
        prev = pivot
    return Fraction(sign) * M[n - 1][n - 1]


def det(A: np.ndarray) -> Scalar:
    """行列式；0×0 矩阵的行列式为 1"""
    n = require_square(A)
    if n == 0:
        return Fraction(1) if is_exact(A) else 1.0
    if is_exact(A):
        return _bareiss_det(A)
    value = np.linalg.det(A)
    return complex(value) if np.iscomplexobj(A) else float(value)


def _singular_float(A: np.ndarray) -> Tuple[bool, Scalar]:
    n = A.shape[0]
    value = det(A)
    row_norm = float(np.max(np.linalg.norm(A, axis=1))) if n else 1.0
    return abs(value) < settings.singular_threshold * row_norm**n, value


def inverse(A: np.ndarray, name: str = "A") -> np.ndarray:
    """逆矩阵；奇异时抛出带行列式值的异常"""
    n = require_square(A, name)
    if not is_exact(A):
        singular, value = _singular_float(A)
        if singular:
            raise SingularMatrixError(name, value)
        return np.linalg.inv(A)

    # Gauss-Jordan 消元
    M = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot_row is None:
            raise SingularMatrixError(name, Fraction(0))
        M[col], M[pivot_row] = M[pivot_row], M[col]
        pivot = M[col][col]
        M[col] = [x / pivot for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                factor = M[r][col]
                M[r] = [a - factor * b for a, b in zip(M[r], M[col])]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = M[i][n + j]
    return out


def pfaffian(A: np.ndarray, name: str = "A") -> Scalar:
    """Pfaffian

    反对称消元：每一步选取第0行中的主元并交换到第1列，
    Pf(A) = a·Pf(A22 − A21·A11⁻¹·A12)。浮点情形按模长最大选主元。
    """
    n = require_square(A, name)
    if not is_skew(A):
        raise NotSkewSymmetricError(name)
    exact = is_exact(A)
    one = Fraction(1) if exact else 1.0
    if n % 2:
        return Fraction(0) if exact else 0.0
    M = A.copy()
    result = one
    while M.shape[0] > 0:
        row = M[0, 1:]
        if exact:
            pivot = next((j + 1 for j, x in enumerate(row) if x != 0), None)
        else:
            j = int(np.argmax(np.abs(row)))
            pivot = j + 1 if abs(row[j]) > 0 else None
        if pivot is None:
            return Fraction(0) if exact else 0.0
        if pivot != 1:
            perm = list(range(M.shape[0]))
            perm[1], perm[pivot] = perm[pivot], perm[1]
            M = M[np.ix_(perm, perm)]
            result = -result
        a = M[0, 1]
        result = result * a
        if M.shape[0] == 2:
            break
        a11_inv = np.array([[0 * a, -one / a], [one / a, 0 * a]], dtype=M.dtype)
        M = M[2:, 2:] - M[2:, :2] @ a11_inv @ M[:2, 2:]
    if not exact:
        return complex(result) if np.iscomplexobj(A) else float(result)
    return result


def block_inverse(
    A: np.ndarray, B: np.ndarray, C: np.ndarray, D: np.ndarray
) -> Tuple[BlockInverse, np.ndarray]:
    """分块求逆：𝓜 = B D⁻¹ C − A

    [[A, B], [C, D]]⁻¹ = [[−𝓜⁻¹, 𝓜⁻¹BD⁻¹], [D⁻¹C𝓜⁻¹, D⁻¹ − D⁻¹C𝓜⁻¹BD⁻¹]]
    """
    p = require_square(A, "A")
    q = require_square(D, "D")
    if B.shape != (p, q):
        raise DimensionMismatchError("B", (p, q), B.shape)
    if C.shape != (q, p):
        raise DimensionMismatchError("C", (q, p), C.shape)
    d_inv = inverse(D, "D")
    schur = B @ d_inv @ C - A
    s_inv = inverse(schur, "𝓜")
    blocks = BlockInverse(
        top_left=-s_inv,
        top_right=s_inv @ B @ d_inv,
        bottom_left=d_inv @ C @ s_inv,
        bottom_right=d_inv - d_inv @ C @ s_inv @ B @ d_inv,
    )
    return blocks, schur


def principal_minor(A: np.ndarray, S: Iterable[int], pfaffian_mode: bool = False) -> Scalar:
    """主子式：行列式模式返回 det A_S，Pfaffian模式返回 pf A_S（S 为原始行列下标）"""
    n = require_square(A)
    idx = subset_index(S, n)
    if not idx:
        return Fraction(1) if is_exact(A) else 1.0
    block = submatrix(A, idx, idx)
    return pfaffian(block) if pfaffian_mode else det(block)


def is_zero(x: Scalar, tol: float = 0.0) -> bool:
    if isinstance(x, Fraction) or isinstance(x, int):
        return x == 0
    return abs(x) <= tol


def close(a: Scalar, b: Scalar, tol: float) -> bool:
    """精确值精确比较，浮点值按 tol·max(1,|b|) 比较"""
    if isinstance(a, Rational) and isinstance(b, Rational):
        return a == b
    if not isinstance(a, Complex) or not isinstance(b, Complex):
        return False
    return abs(complex(a) - complex(b)) <= tol * max(1.0, abs(complex(b)))
