"""
命令行模块
"""
import argparse

from app.cli import kernels, points, sampling, verify
from app.core.config import get_settings

settings = get_settings()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpp",
        description=f"{settings.app_name} v{settings.version}",
    )
    parser.add_argument("--log-level", default=None, help="覆盖 LOG_LEVEL 设置")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    # 包含各个子命令
    kernels.register(subparsers)
    verify.register(subparsers)
    sampling.register(subparsers)
    points.register(subparsers)
    return parser
