"""
CLI 公共部分 - 命令结果、输出与输入解析
"""
import argparse
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd

from lefschetz.core.config import DEFAULT_FORMAT, EXIT_OK, FIXTURE_PREFIX, OUTPUT_FORMATS
from lefschetz.core.dependencies import get_data_service
from lefschetz.core.exceptions import PreconditionError
from lefschetz.services.factorization_service import PositiveFactorization


@dataclass
class CommandOutcome:
    """
    命令结果
    payload 写到 stdout（机器可读），诊断信息走 stderr 的日志
    """
    exit_code: int = EXIT_OK
    payload: Dict[str, Any] = field(default_factory=dict)
    table: Optional[pd.DataFrame] = None


# ==================== 参数 ====================

def add_input_arguments(parser: argparse.ArgumentParser, required: bool = True):
    """-i/--input 与 --fixture 二选一"""
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("-i", "--input", "--seed", dest="input", help="分解文件路径，或 fixture:<id>")
    group.add_argument("--fixture", help="内置分解名，如 g1-chain")


def add_output_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default=DEFAULT_FORMAT, help="输出格式")
    parser.add_argument("--reproducible", action="store_true", help="省略时间戳，保证输出逐字节可复现")


def load_input(args: argparse.Namespace, check_relation: bool = True) -> PositiveFactorization:
    """
    Raises:
        PreconditionError: 没有给出输入
    """
    source = None
    if getattr(args, "fixture", None):
        source = FIXTURE_PREFIX + args.fixture
    elif getattr(args, "input", None):
        source = args.input
    if source is None:
        raise PreconditionError("No input factorization: pass -i/--input or --fixture")
    return get_data_service().load_factorization(source, check_relation=check_relation)


def timestamp(args: argparse.Namespace) -> Optional[str]:
    if getattr(args, "reproducible", False):
        return None
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# ==================== 输出 ====================

def render_text(payload: Dict[str, Any], table: Optional[pd.DataFrame] = None) -> str:
    """
    人类可读摘要：标量字段一行一项，嵌套字段展开为 key.sub
    有表格时，列表形式的记录由表格展示，不再逐项展开
    """
    rows = []

    def walk(prefix: str, value: Any):
        if isinstance(value, dict) and value:
            for key, sub in value.items():
                walk(f"{prefix}.{key}" if prefix else str(key), sub)
        elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            if table is not None:
                return
            for position, sub in enumerate(value):
                walk(f"{prefix}[{position}]", sub)
        else:
            rows.append({"field": prefix, "value": value if not isinstance(value, list) else ", ".join(map(str, value))})

    walk("", payload)
    parts = []
    if table is not None:
        parts.append(table.to_string(index=False))
    if rows:
        parts.append(pd.DataFrame(rows).to_string(index=False))
    return "\n\n".join(parts)


def emit(outcome: CommandOutcome, fmt: str = DEFAULT_FORMAT, stream=None):
    stream = stream or sys.stdout
    if fmt == "text":
        stream.write(render_text(outcome.payload, outcome.table) + "\n")
    else:
        stream.write(json.dumps(outcome.payload, indent=2, ensure_ascii=False) + "\n")


def write_output(f: PositiveFactorization, path: Optional[str]) -> Optional[str]:
    if not path:
        return None
    return str(get_data_service().save_factorization(f, Path(path)))
