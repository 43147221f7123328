"""
Main entry point for honestnoise
Command-line application with one module per sub-command
"""
import argparse
import logging
import sys
from typing import List, Optional

from honestnoise import __version__
from honestnoise.commands import approximate, diamond, figures, honesty, tables, twirl
from honestnoise.commands.common import EXIT_PARSE
from honestnoise.core.config import get_debug_mode


class CommandParser(argparse.ArgumentParser):
    """Usage errors exit with the parse-error code"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> CommandParser:
    """
    Create the argument parser with every sub-command registered

    Returns:
        CommandParser: Parser whose namespaces carry a ``handler``
    """
    parser = CommandParser(
        prog="honestnoise",
        description="Honest Pauli and mixed-Clifford approximations of quantum channels",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Include sub-commands
    approximate.add_parser(subparsers)
    tables.add_parser(subparsers)
    figures.add_parser(subparsers)
    diamond.add_parser(subparsers)
    honesty.add_parser(subparsers)
    twirl.add_parser(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=logging.DEBUG if get_debug_mode() else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    return args.handler(args)


# Application entry point
if __name__ == "__main__":
    sys.exit(main())
