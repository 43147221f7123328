"""
fig1-data: Bloch-plane images and distinguishability curves
"""
import argparse
from pathlib import Path

from honestnoise.commands.common import EXIT_OK, add_optimizer_arguments, exit_codes, options_from_args
from honestnoise.core.figures import fig1_data, write_fig1_data


@exit_codes
def run(args: argparse.Namespace) -> int:
    opts = options_from_args(args)
    for j in ([0, 1, 2] if args.j == "all" else [int(args.j)]):
        plane_path, curve_path = write_fig1_data(fig1_data(j, opts), args.out)
        print(f"j={j}: {plane_path} {curve_path}")
    return EXIT_OK


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("fig1-data", help="export rotation-approximation data files")
    parser.add_argument("--j", choices=["0", "1", "2", "all"], default="all",
                        help="rotation axis at j*pi/8 from z (default all)")
    parser.add_argument("--out", type=Path, default=Path("fig1"), help="output directory (default ./fig1)")
    add_optimizer_arguments(parser)
    parser.set_defaults(handler=run)
