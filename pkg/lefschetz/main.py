"""
命令行入口 - 注册各命令模块并把领域异常映射为退出码
"""
import argparse
import logging
import sys
from typing import List, Optional

from lefschetz import __version__
from lefschetz.cli.common import emit
from lefschetz.cli.commands import build, fixtures, hurwitz, invariants, validate
from lefschetz.core.config import EXIT_ABSENT, EXIT_IO_ERROR, EXIT_VALIDATION_FAILED
from lefschetz.core.exceptions import (
    DimensionError,
    FactorizationFormatError,
    InvalidCurveError,
    LefschetzError,
    RelationCheckError,
    SpinDeclarationError,
    WordSyntaxError,
)

logger = logging.getLogger("lefschetz")

# 退出码映射：校验失败 → 1，格式/读写 → 3，其余领域错误（结果不存在、前置条件）→ 2
VALIDATION_ERRORS = (RelationCheckError, SpinDeclarationError)
FORMAT_ERRORS = (FactorizationFormatError, WordSyntaxError, DimensionError, InvalidCurveError)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lefschetz",
        description="正 Dehn 扭转分解的精确同调演算：校验、不变量、配方构造与 Hurwitz 改写",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="输出 DEBUG 日志")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # 注册命令（每个模块一个命令）
    for module in (validate, invariants, build, hurwitz, fixtures):
        module.register(subparsers)
    return parser


def configure_logging(verbose: bool):
    """日志只写 stderr，stdout 留给机器可读输出"""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("lefschetz")
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    root.propagate = False


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    try:
        outcome = args.handler(args)
    except VALIDATION_ERRORS as e:
        logger.error("❌ %s", e)
        return EXIT_VALIDATION_FAILED
    except FORMAT_ERRORS as e:
        logger.error("❌ %s", e)
        return EXIT_IO_ERROR
    except (FileNotFoundError, OSError) as e:
        logger.error("❌ %s", e)
        return EXIT_IO_ERROR
    except LefschetzError as e:
        step = getattr(e, "step", None)
        if step is not None:
            logger.error("❌ step %d: %s", step, e)
        else:
            logger.error("❌ %s", e)
        return EXIT_ABSENT

    emit(outcome, getattr(args, "format", "json"))
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
