"""
reproduce-tables: recompute the approximation tables and compare with the golden dataset
"""
import argparse
from pathlib import Path

from honestnoise.commands.common import (
    EXIT_MISMATCH,
    EXIT_OK,
    add_optimizer_arguments,
    emit,
    exit_codes,
    options_from_args,
)
from honestnoise.core.golden import TABLES, format_comparison, reproduce_tables


def _table_choice(value: str):
    if value == "all":
        return TABLES
    try:
        table = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 1-5 or 'all', got {value!r}")
    if table not in TABLES:
        raise argparse.ArgumentTypeError(f"expected 1-5 or 'all', got {value!r}")
    return (table,)


@exit_codes
def run(args: argparse.Namespace) -> int:
    comparison = reproduce_tables(args.table, options_from_args(args), tol=args.tol)
    print(format_comparison(comparison))
    if args.out is not None:
        emit(comparison, args.out)
    return EXIT_OK if comparison.passed else EXIT_MISMATCH


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("reproduce-tables", help="recompute Tables I-V and compare")
    parser.add_argument("--table", type=_table_choice, default=TABLES, help="1-5 or all (default all)")
    parser.add_argument("--tol", type=float, help="override every cell's tolerance")
    parser.add_argument("--out", type=Path, help="write the comparison as JSON")
    add_optimizer_arguments(parser)
    parser.set_defaults(handler=run)
