"""
命令行主入口
退出码：0 成功或验证通过，1 验证失败，2 输入或计算错误。
"""
import json
import sys
from typing import List, Optional

from pydantic import ValidationError

from app.cli import build_parser
from app.core.config import get_settings
from app.core.exceptions import EngineError
from app.core.logging import computation_logger, configure_logging, error_logger
from app.models.schemas import RunConfig

settings = get_settings()

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2

_CONFIG_FIELDS = ("spec", "points", "out", "tol", "cutoff", "seed", "scalar", "suites", "run_all", "samples")


def build_config(args) -> RunConfig:
    values = {name: getattr(args, name) for name in _CONFIG_FIELDS if getattr(args, name, None) is not None}
    return RunConfig(command=args.command, **values)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)

    try:
        cfg = build_config(args)
        computation_logger.info("Command started", command=cfg.command.value, scalar=cfg.scalar.value)
        status = args.handler(cfg, args)
    except ValidationError as exc:
        error_logger.log_input_error(args.command, exc)
        print(f"输入校验失败: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except json.JSONDecodeError as exc:
        error_logger.log_input_error(args.command, exc)
        print(f"JSON 解析失败: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except EngineError as exc:
        error_logger.error("Command failed", command=args.command, error_type=type(exc).__name__, error=str(exc))
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR

    computation_logger.info("Command finished", command=args.command, status=status)
    return EXIT_FAILED if status else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
