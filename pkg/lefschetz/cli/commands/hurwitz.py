"""
hurwitz 命令 - 执行 Hurwitz 调度并比较前后的不变量
"""
import argparse
import hashlib
import logging
from typing import Any, Dict

import pandas as pd

from lefschetz.cli.common import (
    CommandOutcome,
    add_input_arguments,
    add_output_arguments,
    load_input,
    write_output,
)
from lefschetz.core.config import EXIT_OK, EXIT_VALIDATION_FAILED
from lefschetz.core.dependencies import get_factorization_service, get_invariant_service
from lefschetz.services.algebra import matrix_key
from lefschetz.services.factorization_service import PositiveFactorization
from lefschetz.services.word_parser import ScheduleParser

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("hurwitz", help="执行 Hurwitz 调度，如 R1,L1 或 C")
    add_input_arguments(parser)
    add_output_arguments(parser)
    parser.add_argument("-s", "--schedule", required=True, help="逗号分隔的 R<i> / L<i> / C（i 从 1 开始）")
    parser.add_argument("-o", "--output", help="结果分解文件")
    parser.set_defaults(handler=run)


def _snapshot(f: PositiveFactorization) -> Dict[str, Any]:
    """调度前后需要一致的量"""
    invariants = get_invariant_service()
    snapshot = {
        "genus": f.genus,
        "length": f.length,
        "product_matrix": hashlib.sha1(str(matrix_key(f.product_matrix)).encode("utf-8")).hexdigest()[:12],
        "separating": sorted(f.separating_counts().items()),
        "spin_feasible": invariants.spin_feasibility(f).feasible,
    }
    if f.is_closed:
        snapshot["e"] = invariants.euler_characteristic(f)
        snapshot["sigma"] = invariants.signature(f)
    return snapshot


def run(args: argparse.Namespace) -> CommandOutcome:
    f = load_input(args)
    schedule = ScheduleParser.parse(args.schedule)
    result = get_factorization_service().apply_schedule(f, schedule)

    before, after = _snapshot(f), _snapshot(result)
    rows = [{"invariant": key, "before": before[key], "after": after.get(key), "equal": before[key] == after.get(key)}
            for key in before]
    equal = all(row["equal"] for row in rows)
    if not equal:
        logger.error("❌ Invariants changed under the schedule")

    payload = {
        "schedule": [str(step) for step in schedule],
        "invariants_equal": equal,
        "comparison": rows,
        "output": write_output(result, args.output),
        "twists": [c.name for c in result.twists],
    }
    return CommandOutcome(EXIT_OK if equal else EXIT_VALIDATION_FAILED, payload, table=pd.DataFrame(rows))
