"""
diamond: diamond-norm distance between two channel files
"""
import argparse
from pathlib import Path

from honestnoise.commands.common import EXIT_OK, emit, exit_codes, load_channel
from honestnoise.core.diamond import diamond_distance, diamond_lower_bound
from honestnoise.core.errors import DimensionMismatchError
from honestnoise.models.schemas import DiamondReport


@exit_codes
def run(args: argparse.Namespace) -> int:
    _, first = load_channel(args.first)
    _, second = load_channel(args.second)
    if first.n_qubits != second.n_qubits:
        raise DimensionMismatchError(
            f"channels act on {first.n_qubits} and {second.n_qubits} qubit(s)"
        )
    result = diamond_distance(first, second)
    lower = diamond_lower_bound(first, second, n_restarts=args.lower_bound_restarts, seed=args.seed)
    print(f"{result.value:.6f}")
    print(f"duality gap {result.solution.gap:.2e}, sampled lower bound {lower:.6f}")
    if args.out is not None:
        emit(DiamondReport(
            value=result.value,
            primal=result.solution.primal,
            dual=result.solution.dual,
            gap=result.solution.gap,
            iterations=result.solution.iterations,
            lower_bound=lower,
        ), args.out)
    return EXIT_OK


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("diamond", help="diamond-norm distance between two channels")
    parser.add_argument("first", type=Path, help="channel file A")
    parser.add_argument("second", type=Path, help="channel file B")
    parser.add_argument("--lower-bound-restarts", type=int, default=8,
                        help="random starts of the sampled lower bound (default 8)")
    parser.add_argument("--seed", type=int, default=0, help="seed of the sampled lower bound")
    parser.add_argument("--out", type=Path, help="write diagnostics as JSON")
    parser.set_defaults(handler=run)
