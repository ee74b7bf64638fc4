"""
命令行输入输出
JSON规格文件的读取与校验、点列表解析、CSV/JSON 产物的写出。
"""
import csv
import io
import json
import re
import sys
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Type, TypeVar

from pydantic import BaseModel

from app.core.exceptions import InputError
from app.core.logging import error_logger
from app.models.schemas import OutputFormat
from app.services.schur_process import SpacePoint
from app.utils.linalg import Scalar

ModelT = TypeVar("ModelT", bound=BaseModel)

_POINT = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def read_json(path: Optional[str]) -> Any:
    """读取 JSON 文件；"-" 表示标准输入"""
    if not path:
        raise InputError("缺少 --spec 参数")
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        error_logger.log_input_error(path, exc)
        raise InputError(f"无法读取规格文件 {path}: {exc}") from exc
    return json.loads(text)


def load_payload(path: Optional[str], model: Type[ModelT]) -> ModelT:
    return model.model_validate(read_json(path))


def parse_points(text: Optional[str]) -> List[SpacePoint]:
    """"(1,0),(2,-1)" → [SpacePoint(1,0), SpacePoint(2,-1)]"""
    if not text:
        raise InputError("缺少 --points 参数")
    matches = list(_POINT.finditer(text))
    leftover = _POINT.sub("", text).replace(",", "").strip()
    if not matches or leftover:
        raise InputError(f"无法解析的点列表: {text!r}（格式为 \"(i,u),(j,v)\"）")
    return [SpacePoint(int(m.group(1)), int(m.group(2))) for m in matches]


def output_format(out: Optional[str]) -> OutputFormat:
    """--out 为 csv/json 时写到标准输出，否则按文件后缀决定格式"""
    if out is None:
        return OutputFormat.JSON
    lowered = out.lower()
    if lowered in (OutputFormat.CSV.value, OutputFormat.JSON.value):
        return OutputFormat(lowered)
    return OutputFormat.CSV if lowered.endswith(".csv") else OutputFormat.JSON


def _destination(out: Optional[str]) -> Optional[Path]:
    if out is None or out.lower() in (OutputFormat.CSV.value, OutputFormat.JSON.value):
        return None
    return Path(out)


def _emit(text: str, out: Optional[str]) -> None:
    target = _destination(out)
    if target is None:
        sys.stdout.write(text)
        return
    try:
        target.write_text(text, encoding="utf-8")
    except OSError as exc:
        error_logger.log_input_error(str(target), exc)
        raise InputError(f"无法写入输出文件 {target}: {exc}") from exc


def format_real(x: float) -> str:
    return "{:.17g}".format(x)


def scalar_columns(value: Scalar) -> List[str]:
    """(re, im) 两列：精确值写成 "p/q"，浮点值保留17位有效数字"""
    if isinstance(value, Rational):
        return [str(Fraction(value)), "0"]
    z = complex(value)
    return [format_real(z.real), format_real(z.imag)]


def write_json(payload: Dict[str, Any], out: Optional[str]) -> None:
    _emit(json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=False) + "\n", out)


def write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], out: Optional[str]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _emit(buffer.getvalue(), out)


def write_report(payload: Dict[str, Any], header: Sequence[str], rows: List[Sequence[Any]], out: Optional[str]):
    """按 --out 选择写 JSON 载荷或 CSV 表格"""
    if output_format(out) == OutputFormat.CSV:
        write_csv(header, rows, out)
    else:
        write_json(payload, out)
