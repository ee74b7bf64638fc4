"""
日志配置模块
"""
import logging
import sys
from typing import Any, Optional

import structlog

from app.core.config import get_settings

settings = get_settings()


def configure_logging(level: Optional[str] = None) -> None:
    """配置结构化日志（输出到stderr，标准输出留给计算结果）"""
    level_name = (level or settings.log_level).upper()
    log_level = getattr(logging, level_name, logging.WARNING)

    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=log_level)

    use_console = settings.debug or settings.log_format == "console"
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.dev.set_exc_info,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.dev.ConsoleRenderer()
            if use_console
            else structlog.processors.JSONRenderer(),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(log_level),
        context_class=dict,
        logger_factory=structlog.WriteLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=True,
    )


def get_logger(name: Optional[str] = None) -> Any:
    """获取结构化日志器"""
    return structlog.get_logger(name)


class ComputationLogger:
    """计算过程日志记录器"""

    def __init__(self):
        self.logger = get_logger("computation")

    def log_kernel_built(self, kind: str, size: int, exact: bool, elapsed: float):
        """记录核矩阵构建"""
        self.logger.info(
            "Kernel built",
            kind=kind,
            size=size,
            exact=exact,
            elapsed_seconds=round(elapsed, 6),
        )

    def log_enumeration(self, kind: str, configs: int, elapsed: float):
        """记录枚举完成"""
        self.logger.info(
            "Enumeration finished",
            kind=kind,
            configs=configs,
            elapsed_seconds=round(elapsed, 6),
        )

    def log_quadrature(self, points: int, doublings: int, delta: float):
        """记录围道积分收敛情况"""
        self.logger.debug(
            "Quadrature converged", points=points, doublings=doublings, delta=delta
        )

    def log_suite(self, suite: str, cases: int, max_deviation: float, passed: bool):
        """记录验证套件结果"""
        self.logger.info(
            "Verification suite finished",
            suite=suite,
            cases=cases,
            max_deviation=max_deviation,
            passed=passed,
        )

    def info(self, message: str, **kwargs):
        """通用信息日志"""
        self.logger.info(message, **kwargs)

    def debug(self, message: str, **kwargs):
        self.logger.debug(message, **kwargs)


class ErrorLogger:
    """错误日志记录器"""

    def __init__(self):
        self.logger = get_logger("error")

    def log_input_error(self, source: str, error: Exception):
        """记录输入错误"""
        self.logger.error(
            "Input error",
            source=source,
            error_type=type(error).__name__,
            error_message=str(error),
        )

    def log_numeric_error(self, operation: str, error: Exception, **context: Any):
        """记录数值计算错误"""
        self.logger.error(
            "Numeric error",
            operation=operation,
            error_type=type(error).__name__,
            error_message=str(error),
            **context,
        )

    def error(self, message: str, **kwargs):
        """通用错误日志"""
        self.logger.error(message, **kwargs)

    def warning(self, message: str, **kwargs):
        """通用警告日志"""
        self.logger.warning(message, **kwargs)


# 全局日志器实例
computation_logger = ComputationLogger()
error_logger = ErrorLogger()
