"""
twirl: Pauli twirl of a channel file and its distances
"""
import argparse
import logging
from pathlib import Path

from pydantic import ValidationError

from honestnoise.commands.common import EXIT_OK, emit, exit_codes, load_channel
from honestnoise.core.approximator import approximate_pauli
from honestnoise.core.channels import identity_channel
from honestnoise.core.diamond import diamond_distance
from honestnoise.core.errors import ParseError
from honestnoise.core.twirl import pauli_twirl, twirl_equivalence_check, twirled_chi
from honestnoise.models.schemas import ChannelDocument, OptimizerOptions, TwirlReport

logger = logging.getLogger(__name__)


def _pauli_options(args: argparse.Namespace) -> OptimizerOptions:
    overrides = {"seed": args.seed, "empirical_samples": 0}
    if args.restarts is not None:
        overrides["restarts"] = args.restarts
    try:
        return OptimizerOptions(**overrides)
    except ValidationError as e:
        raise ParseError(f"invalid optimizer options: {e}")


@exit_codes
def run(args: argparse.Namespace) -> int:
    document, channel = load_channel(args.channel)
    twirled = pauli_twirl(channel)
    identity = identity_channel(channel.n_qubits)
    chi = twirled_chi(channel)
    pauli_distance = pauli_to_identity = None
    if args.pauli:
        logger.info("comparing with the honest Pauli approximation of %s", document.label)
        honest = approximate_pauli(channel, _pauli_options(args))
        pauli_distance = honest.diamond_dist
        pauli_to_identity = diamond_distance(honest.mixture.to_channel(), identity).value
    report = TwirlReport(
        channel_label=document.label,
        chi_labels=list(chi.labels),
        chi_diag=[float(v) for v in chi.diagonal()],
        twirl_distance=diamond_distance(channel, twirled).value,
        twirl_to_identity=diamond_distance(twirled, identity).value,
        channel_to_identity=diamond_distance(channel, identity).value,
        pauli_distance=pauli_distance,
        pauli_to_identity=pauli_to_identity,
        equivalence_deviation=twirl_equivalence_check(channel, args.samples, args.seed),
        twirled=ChannelDocument.from_channel(twirled, label=f"{document.label}-twirl"),
    )
    print(f"{document.label}: ||L - L_t|| = {report.twirl_distance:.4f}, "
          f"||L_t - I|| = {report.twirl_to_identity:.4f}, ||L - I|| = {report.channel_to_identity:.4f}")
    if report.pauli_to_identity is not None:
        print(f"honest Pauli: ||L - L_P|| = {report.pauli_distance:.4f}, ||L_P - I|| = {report.pauli_to_identity:.4f}")
    print("chi diagonal: " + ", ".join(f"{l}={v:.6f}" for l, v in zip(report.chi_labels, report.chi_diag)))
    if args.out is not None:
        emit(report, args.out)
    return EXIT_OK


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("twirl", help="Pauli twirl of a channel")
    parser.add_argument("channel", type=Path, help="channel file (JSON)")
    parser.add_argument("--samples", type=int, default=100, help="states for the twirl equivalence check")
    parser.add_argument("--seed", type=int, default=0, help="seed of the equivalence check and the Pauli search")
    parser.add_argument("--pauli", action="store_true",
                        help="also run the honest Pauli approximation and report ||L_P - I||")
    parser.add_argument("--restarts", type=int, help="restarts of the Pauli search (HONEST_RESTARTS, default 16)")
    parser.add_argument("--out", type=Path, help="write the report, including the twirled channel, as JSON")
    parser.set_defaults(handler=run)
