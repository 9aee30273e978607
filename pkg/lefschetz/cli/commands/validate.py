"""
validate 命令 - 校验分解的不变量
"""
import argparse
import logging

from lefschetz.cli.common import CommandOutcome, add_input_arguments, add_output_arguments, load_input
from lefschetz.core.config import EXIT_OK, EXIT_VALIDATION_FAILED
from lefschetz.core.dependencies import get_factorization_service

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("validate", help="校验分解（关系、自旋声明）")
    add_input_arguments(parser)
    add_output_arguments(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> CommandOutcome:
    f = load_input(args, check_relation=False)
    report = get_factorization_service().validate(f)
    if report.valid:
        logger.info("✅ %s is valid", f.name)
    else:
        logger.warning("❌ %s: %s", f.name, "; ".join(report.failures))
    return CommandOutcome(EXIT_OK if report.valid else EXIT_VALIDATION_FAILED, report.to_dict())
