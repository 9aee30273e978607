"""
fixtures 命令 - 列出内置分解
"""
import argparse

import pandas as pd

from lefschetz.cli.common import CommandOutcome, add_output_arguments
from lefschetz.services.fixtures import list_fixtures


def register(subparsers):
    parser = subparsers.add_parser("fixtures", help="列出内置分解")
    add_output_arguments(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> CommandOutcome:
    items = [metadata.model_dump() for metadata in list_fixtures()]
    table = pd.DataFrame(items, columns=["id", "genus", "length", "endo_signature", "description"])
    return CommandOutcome(payload={"fixtures": items}, table=table)
