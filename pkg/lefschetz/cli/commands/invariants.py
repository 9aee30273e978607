"""
invariants 命令 - 输出不变量报告
"""
import argparse

from lefschetz.cli.common import (
    CommandOutcome,
    add_input_arguments,
    add_output_arguments,
    load_input,
    timestamp,
)
from lefschetz.core.dependencies import get_invariant_service
from lefschetz.schemas.report import InvariantReportModel


def register(subparsers):
    parser = subparsers.add_parser("invariants", help="Euler 示性数、符号差、自旋判定与同胚类型")
    add_input_arguments(parser)
    add_output_arguments(parser)
    parser.add_argument("--certify", action="store_true", help="附带证书内容")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> CommandOutcome:
    f = load_input(args)
    report = get_invariant_service().report(f, certify=args.certify)
    model = InvariantReportModel(**report.to_dict(), generated_at=timestamp(args))
    exclude = {"generated_at"} if model.generated_at is None else set()
    return CommandOutcome(payload=model.model_dump(mode="json", exclude=exclude))
