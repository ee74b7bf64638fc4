"""
JSON载荷与运行配置模型
矩阵单元格可以是整数、"p/q" 字符串、浮点数或 [re, im] 复数对。
"""
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, StrictFloat, StrictInt, field_validator, model_validator

from app.core.config import get_settings
from app.services.abstract_points import KernelWitness, TensorPoint
from app.services.eynard_mehta import EMSpec, PfEMSpec
from app.services.point_process import GroundSet, LEnsemble, PfLEnsemble
from app.services.schur_process import SchurSpec
from app.services.symfunc import Specialization
from app.utils.linalg import Scalar, as_matrix, to_float

settings = get_settings()

Cell = Union[StrictInt, StrictFloat, str, Tuple[Union[StrictInt, StrictFloat, str], Union[StrictInt, StrictFloat, str]]]
Label = Union[StrictInt, str]


class ScalarMode(str, Enum):
    """标量后端"""

    EXACT = "exact"
    FLOAT = "float"


class Command(str, Enum):
    """命令行子命令"""

    KERNEL = "kernel"
    PF_KERNEL = "pf-kernel"
    EM_KERNEL = "em-kernel"
    SCHUR_KERNEL = "schur-kernel"
    SCHUR_VERIFY = "schur-verify"
    VERIFY = "verify"
    SAMPLE = "sample"
    POINT_ACTION = "point-action"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


# ---------------------------------------------------------------- 标量编解码


def _real_part(value: Any, exact: bool) -> Scalar:
    if isinstance(value, bool):
        raise ValueError(f"不支持布尔值作为矩阵元素: {value}")
    if isinstance(value, int):
        return Fraction(value) if exact else float(value)
    if isinstance(value, float):
        # 十进制字面量按书写值精确转换（0.1 → 1/10）
        return Fraction(repr(value)) if exact else value
    if isinstance(value, str):
        try:
            parsed = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"无法解析的数值: {value!r}") from None
        return parsed if exact else float(parsed)
    raise ValueError(f"无法解析的数值: {value!r}")


def parse_scalar(cell: Any, mode: ScalarMode = ScalarMode.EXACT) -> Scalar:
    """单元格转标量：精确模式下有理输入保持为 Fraction，虚部非零时转为复数"""
    exact = mode == ScalarMode.EXACT
    if isinstance(cell, (list, tuple)):
        if len(cell) != 2:
            raise ValueError(f"复数必须写成 [re, im]: {cell!r}")
        re, im = _real_part(cell[0], exact), _real_part(cell[1], exact)
        if im == 0:
            return re
        return complex(float(re), float(im))
    return _real_part(cell, exact)


def encode_scalar(value: Any) -> Any:
    """Fraction 写成 "p/q"，复数写成 [re, im]，其余写成浮点数"""
    if isinstance(value, Rational):
        return str(Fraction(value))
    value = complex(value)
    if value.imag == 0:
        return value.real
    return [value.real, value.imag]


def encode_matrix(A: np.ndarray) -> Dict[str, Any]:
    return {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]) if A.ndim > 1 else 1,
        "data": [[encode_scalar(x) for x in row] for row in A],
    }


# ---------------------------------------------------------------- 载荷模型


class MatrixPayload(BaseModel):
    """{"rows": r, "cols": c, "data": [[...]]}，也接受裸的二维列表"""

    rows: Optional[int] = None
    cols: Optional[int] = None
    data: List[List[Cell]]

    @model_validator(mode="before")
    @classmethod
    def accept_bare_list(cls, value: Any) -> Any:
        if isinstance(value, list):
            return {"data": value}
        return value

    @model_validator(mode="after")
    def check_shape(self) -> "MatrixPayload":
        widths = {len(row) for row in self.data}
        if len(widths) > 1:
            raise ValueError(f"矩阵各行长度不一致: {sorted(widths)}")
        if self.rows is not None and self.rows != len(self.data):
            raise ValueError(f"rows={self.rows} 与数据行数 {len(self.data)} 不符")
        if self.cols is not None and self.data and self.cols != len(self.data[0]):
            raise ValueError(f"cols={self.cols} 与数据列数 {len(self.data[0])} 不符")
        return self

    def to_array(self, name: str = "A", mode: ScalarMode = ScalarMode.EXACT) -> np.ndarray:
        cols = self.cols if self.cols is not None else (len(self.data[0]) if self.data else 0)
        if not self.data:
            return as_matrix(np.empty((0, cols), dtype=object), name)
        A = as_matrix([[parse_scalar(c, mode) for c in row] for row in self.data], name)
        return to_float(A) if mode == ScalarMode.FLOAT else A


class LEnsemblePayload(BaseModel):
    """{"ground": [labels], "L": matrix, "window": [labels]}"""

    ground: Optional[List[Label]] = None
    L: MatrixPayload
    window: Optional[List[Label]] = None

    def labels(self, size: int) -> List[Label]:
        return list(self.ground) if self.ground is not None else list(range(size))

    def to_ensemble(self, mode: ScalarMode = ScalarMode.EXACT) -> LEnsemble:
        L = self.L.to_array("L", mode)
        return LEnsemble.build(self.labels(L.shape[0]), L, self.window)

    def to_pf_ensemble(self, mode: ScalarMode = ScalarMode.EXACT) -> PfLEnsemble:
        L = self.L.to_array("L", mode)
        return PfLEnsemble.build(self.labels(L.shape[0] // 2), L, self.window)


def _level_sets(levels: List[List[Label]]) -> List[GroundSet]:
    return [GroundSet(tuple(labels)) for labels in levels]


class EMSpecPayload(BaseModel):
    """{"levels": [[第1层标签], …], "n": n, "Phi": ..., "Ws": [...], "Psi": ...}"""

    levels: List[List[Label]] = Field(..., min_length=1)
    n: int = Field(..., ge=0)
    Phi: MatrixPayload
    Ws: List[MatrixPayload] = Field(default_factory=list)
    Psi: MatrixPayload

    def to_spec(self, mode: ScalarMode = ScalarMode.EXACT) -> EMSpec:
        return EMSpec(
            _level_sets(self.levels),
            self.n,
            self.Phi.to_array("Phi", mode),
            [W.to_array(f"Ws[{m}]", mode) for m, W in enumerate(self.Ws, 1)],
            self.Psi.to_array("Psi", mode),
        )


class PfEMSpecPayload(BaseModel):
    """{"levels": [[第1层标签], …], "n": n, "epsilon": ..., "Vs": [...], "Xi": ...}"""

    levels: List[List[Label]] = Field(..., min_length=1)
    n: int = Field(..., ge=0)
    epsilon: MatrixPayload
    Vs: List[MatrixPayload] = Field(default_factory=list)
    Xi: MatrixPayload

    def to_spec(self, mode: ScalarMode = ScalarMode.EXACT) -> PfEMSpec:
        return PfEMSpec(
            _level_sets(self.levels),
            self.n,
            self.epsilon.to_array("epsilon", mode),
            [V.to_array(f"Vs[{m}]", mode) for m, V in enumerate(self.Vs, 1)],
            self.Xi.to_array("Xi", mode),
        )


class SpecializationPayload(BaseModel):
    """{"vars": [x_1, …]}，也接受裸列表"""

    vars: List[Cell] = Field(default_factory=list)

    @model_validator(mode="before")
    @classmethod
    def accept_bare_list(cls, value: Any) -> Any:
        if isinstance(value, list):
            return {"vars": value}
        return value

    def to_specialization(self, mode: ScalarMode = ScalarMode.EXACT) -> Specialization:
        return Specialization(tuple(parse_scalar(x, mode) for x in self.vars))


class SchurSpecPayload(BaseModel):
    """{"rho_plus": [ρ₀⁺…], "rho_minus": [ρ₁⁻…], "pfaffian": false}"""

    rho_plus: List[SpecializationPayload] = Field(..., min_length=1)
    rho_minus: List[SpecializationPayload] = Field(..., min_length=1)
    pfaffian: bool = False

    @model_validator(mode="after")
    def check_lengths(self) -> "SchurSpecPayload":
        if len(self.rho_plus) != len(self.rho_minus):
            raise ValueError(
                f"rho_plus 与 rho_minus 长度必须相同: {len(self.rho_plus)} ≠ {len(self.rho_minus)}"
            )
        return self

    def to_spec(self, mode: ScalarMode = ScalarMode.EXACT) -> SchurSpec:
        return SchurSpec(
            len(self.rho_plus),
            tuple(s.to_specialization(mode) for s in self.rho_plus),
            tuple(s.to_specialization(mode) for s in self.rho_minus),
            self.pfaffian,
        )


def parse_mask(key: str, n: int) -> int:
    """"0b0101" 或 "0101"：第 j−1 位对应因子 j"""
    text = key.strip().lower()
    if text.startswith("0b"):
        text = text[2:]
    if not text or any(ch not in "01" for ch in text):
        raise ValueError(f"子集键必须是二进制位串: {key!r}")
    mask = int(text, 2)
    if mask >> n:
        raise ValueError(f"子集键 {key!r} 超出 n = {n}")
    return mask


def mask_key(mask: int, n: int) -> str:
    return "0b" + format(mask, f"0{max(n, 1)}b")


class TensorPointPayload(BaseModel):
    """{"n": n, "coeffs": {"0b0101": [re, im], ...}}，缺省的子集坐标为0"""

    n: int = Field(..., ge=0)
    coeffs: Dict[str, Cell]

    def to_point(self, mode: ScalarMode = ScalarMode.EXACT) -> TensorPoint:
        values = {parse_mask(k, self.n): parse_scalar(v, mode) for k, v in self.coeffs.items()}
        return TensorPoint.from_dict(self.n, values)


def encode_point(p: TensorPoint) -> Dict[str, Any]:
    return {
        "n": p.n,
        "coeffs": {mask_key(mask, p.n): encode_scalar(c) for mask, c in enumerate(p.coeffs) if c != 0},
    }


class WitnessPayload(BaseModel):
    """{"n": n, "m": m, "K": matrix, "pfaffian": false}"""

    n: int = Field(..., ge=0)
    m: int = Field(0, ge=0)
    K: MatrixPayload
    pfaffian: bool = False

    def to_witness(self, mode: ScalarMode = ScalarMode.EXACT) -> KernelWitness:
        return KernelWitness(self.n, self.m, self.K.to_array("K", mode), self.pfaffian)


class ActionPayload(BaseModel):
    """单个作用：GL₂ 元素 {"factor": j, "g": [[a,b],[c,d]]} 或置换 {"permutation": [...]}"""

    factor: Optional[int] = Field(None, ge=1)
    g: Optional[MatrixPayload] = None
    permutation: Optional[List[int]] = None

    @model_validator(mode="after")
    def check_kind(self) -> "ActionPayload":
        is_gl2 = self.factor is not None and self.g is not None
        if is_gl2 == (self.permutation is not None):
            raise ValueError("每个作用必须恰好是 factor+g 或 permutation 之一")
        return self


class PointActionPayload(BaseModel):
    """{"point": ..., "witness": ..., "actions": [...]}，point 与 witness 至少给出一个"""

    point: Optional[TensorPointPayload] = None
    witness: Optional[WitnessPayload] = None
    actions: List[ActionPayload] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_source(self) -> "PointActionPayload":
        if self.point is None and self.witness is None:
            raise ValueError("需要 point 或 witness")
        return self


# ---------------------------------------------------------------- 运行配置与报告


class RunConfig(BaseModel):
    """一次命令行运行的配置"""

    command: Command
    spec: Optional[str] = None
    points: Optional[str] = None
    out: Optional[str] = None
    tol: Optional[float] = None  # None 表示精确比较
    cutoff: int = Field(default_factory=lambda: settings.default_cutoff)
    seed: int = Field(default_factory=lambda: settings.default_seed)
    scalar: ScalarMode = ScalarMode.EXACT
    suites: List[str] = Field(default_factory=list)
    run_all: bool = False
    samples: int = Field(1, ge=1)

    @field_validator("tol", mode="before")
    @classmethod
    def parse_tolerance(cls, v: Any) -> Optional[float]:
        if v is None or (isinstance(v, str) and v.strip().lower() == "exact"):
            return None
        v = float(v)
        if v <= 0:
            raise ValueError("容差必须为正数或 exact")
        return v

    @field_validator("cutoff")
    @classmethod
    def check_cutoff(cls, v: int) -> int:
        if v < 0:
            raise ValueError("截断次数不能为负")
        return v

    @property
    def exact(self) -> bool:
        return self.tol is None


class VerifyReport(BaseModel):
    """验证套件结果：passed 当且仅当每个偏差不超过 (容差 + 尾项)"""

    suite: str
    cases: int = 0
    max_deviation: float = 0.0
    tail_bound: Optional[float] = None
    tolerance: float = 0.0
    passed: bool = True
    failures: List[str] = Field(default_factory=list)


class SchurVerifyRow(BaseModel):
    """schur-verify 报告中的一行"""

    points: str
    kernel_value: Any
    oracle_value: Any
    tail_bound: float
    deviation: float
    passed: bool
