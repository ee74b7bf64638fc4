"""
异常定义模块
"""
from typing import Any, Optional


class EngineError(Exception):
    """引擎基础异常"""


class InputError(EngineError):
    """输入数据错误"""


class DimensionMismatchError(InputError):
    """矩阵维数不匹配"""

    def __init__(self, name: str, expected: Any, actual: Any):
        self.name = name
        self.expected = expected
        self.actual = actual
        super().__init__(f"矩阵 {name} 维数不匹配: 期望 {expected}, 实际 {actual}")


class NotSquareError(DimensionMismatchError):
    """矩阵不是方阵"""


class NotSkewSymmetricError(InputError):
    """矩阵不是反对称矩阵"""

    def __init__(self, name: str = "A"):
        self.name = name
        super().__init__(f"矩阵 {name} 不是反对称矩阵")


class IndexRangeError(InputError):
    """下标越界或重复"""


class SupportFormError(InputError):
    """张量点的支撑集不符合要求"""


class WindowTooSmallError(InputError):
    """窗口不足以容纳配置"""


class SingularMatrixError(EngineError):
    """奇异矩阵"""

    def __init__(self, name: str, determinant: Optional[Any] = None):
        self.name = name
        self.determinant = determinant
        super().__init__(f"矩阵 {name} 奇异, 行列式 = {determinant}")


class DivergenceError(EngineError):
    """乘积或级数发散"""


class ContourError(EngineError):
    """围道半径不可行或与极点冲突"""


class ConvergenceError(EngineError):
    """数值积分未收敛"""


class TailBoundError(EngineError):
    """截断尾项超过要求的容差"""


class EnumerationCapError(EngineError):
    """超出枚举上限"""


class NegativeProbabilityError(EngineError):
    """概率表中存在负值或非实数"""


class ZeroPointError(EngineError):
    """产生了恒为零的张量点"""


class DegenerateRootError(EngineError):
    """二次方程的两个根都不能给出有效核"""


class SingularActionError(EngineError):
    """GL2 作用矩阵奇异"""
