"""
子命令共用的参数定义
"""
import argparse

from app.core.config import get_settings
from app.models.schemas import ScalarMode

settings = get_settings()


def add_spec(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--spec", required=required, help="JSON 规格文件路径（- 为标准输入）")


def add_out(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=None, help="csv / json（写到标准输出）或输出文件路径")


def add_scalar(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--scalar",
        choices=[m.value for m in ScalarMode],
        default=ScalarMode.EXACT.value,
        help="标量后端：exact 为有理数精确计算，float 为浮点/复数",
    )


def add_tol(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", default=None, help="容差（正数）或 exact")


def add_seed(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=settings.default_seed, help="随机种子")


def add_cutoff(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--cutoff", type=int, default=settings.default_cutoff, help="暴力枚举的分划大小截断"
    )
