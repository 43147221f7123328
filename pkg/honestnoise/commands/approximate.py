"""
approximate: honest mixture approximation of a channel file
"""
import argparse
import logging
from pathlib import Path

from honestnoise import __version__
from honestnoise.commands.common import (
    EXIT_OK,
    add_optimizer_arguments,
    certificate_model,
    emit,
    empirical_model,
    exit_codes,
    load_channel,
    options_from_args,
    resolve_mixing_set,
    solver_model,
)
from honestnoise.core.approximator import ApproximationResult, approximate
from honestnoise.models.schemas import ChannelDocument, RunReport, TraceModel

logger = logging.getLogger(__name__)

Z90_NOTE = (
    "chi_diag lists diagonal entries of the full chi matrix; the Z90 element "
    "also contributes imaginary I-Z coherences"
)


def build_report(document: ChannelDocument, set_labels, result: ApproximationResult, opts) -> RunReport:
    mixture = result.mixture
    notes = [Z90_NOTE] if "Z90" in set_labels else []
    if result.certificate.mode.value.startswith("multi-qubit"):
        notes.append("two-qubit certificate is conjectural; see the empirical check")
    return RunReport(
        tool_version=__version__,
        channel_label=document.label,
        channel_digest=document.digest(),
        mixing_set=list(set_labels),
        options=opts,
        probs=[float(p) for p in mixture.probs],
        chi_labels=list(mixture.chi().labels),
        chi_diag=[float(v) for v in result.chi_diag],
        diamond_dist=result.diamond_dist,
        solver=solver_model(result.solution),
        certificate=certificate_model(result.certificate),
        empirical=empirical_model(result.empirical) if result.empirical is not None else None,
        trace=TraceModel(
            restarts=result.trace.restarts,
            iterations=list(result.trace.iterations),
            best_per_restart=list(result.trace.best_per_restart),
            bisection_steps=result.trace.bisection_steps,
            failed_restarts=result.trace.failed_restarts,
        ),
        mixture=ChannelDocument.from_channel(mixture.to_channel(), label=f"{document.label}-approx"),
        notes=notes,
    )


@exit_codes
def run(args: argparse.Namespace) -> int:
    document, channel = load_channel(args.channel)
    mset = resolve_mixing_set(args, channel.n_qubits)
    opts = options_from_args(args)
    result = approximate(channel, mset, opts)
    report = build_report(document, mset.labels, result, opts)
    logger.info("%s: diamond distance %.4f, certificate %s", document.label, result.diamond_dist,
                result.certificate.verdict)
    for label, p in result.mixture.weights().items():
        logger.info("  %-4s %.6f", label, p)
    emit(report, args.out)
    return EXIT_OK


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("approximate", help="closest honest mixture over a mixing set")
    parser.add_argument("channel", type=Path, help="channel file (JSON)")
    parser.add_argument("--set", default="pauli",
                        help="pauli, pauli+H, pauli+Z90, or the path of a mixing-set file (default pauli)")
    parser.add_argument("--support", help="comma-separated Pauli labels for a sparse set, e.g. II,XX")
    parser.add_argument("--out", type=Path, help="report path (default: stdout)")
    add_optimizer_arguments(parser)
    parser.set_defaults(handler=run)
