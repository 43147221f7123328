"""
honesty-check: is an approximation honest for a channel?
"""
import argparse
from pathlib import Path

from honestnoise.commands.common import (
    EXIT_DISHONEST,
    EXIT_OK,
    certificate_model,
    emit,
    empirical_model,
    exit_codes,
    load_channel,
)
from honestnoise.core import config
from honestnoise.core.channels import bloch_map, bloch_vector
from honestnoise.core.errors import DimensionMismatchError
from honestnoise.core.honesty import CertificateMode, certify, empirical_honesty_check
from honestnoise.models.schemas import HonestyReport

EMPIRICAL_THRESHOLD = 1e-8


@exit_codes
def run(args: argparse.Namespace) -> int:
    approx_doc, approx = load_channel(args.approximation)
    truth_doc, truth = load_channel(args.channel)
    if approx.n_qubits != truth.n_qubits:
        raise DimensionMismatchError(
            f"approximation acts on {approx.n_qubits} qubit(s), channel on {truth.n_qubits}"
        )
    samples = config.get_default_samples() if args.samples is None else args.samples
    seed = config.get_default_seed() if args.seed is None else args.seed

    certificate = None
    approx_bloch = bloch_map(approx)
    # A is defined through the Bloch matrix of a unital approximation only
    if approx_bloch.is_unital():
        certificate = certify(approx_bloch.m, truth)
    empirical = empirical_honesty_check(approx, truth, samples, seed, threshold=EMPIRICAL_THRESHOLD)

    dishonest = empirical.violated
    if certificate is not None and certificate.mode is CertificateMode.UNITAL and not certificate.passed:
        dishonest = True
    if certificate is not None:
        print(f"certificate ({certificate.mode.value}): {certificate.verdict}, "
              f"min eig(A - B) = {certificate.min_eig_a_minus_b:.3e}")
    print(f"empirical: max violation {empirical.max_violation:.3e} over {empirical.n_states} states")
    if empirical.violated:
        print(f"witness Bloch vector: {bloch_witness(empirical.witness)}")
    print("dishonest" if dishonest else "honest")

    if args.out is not None:
        emit(HonestyReport(
            approximation_label=approx_doc.label,
            channel_label=truth_doc.label,
            certificate=certificate_model(certificate) if certificate is not None else None,
            empirical=empirical_model(empirical),
            honest=not dishonest,
        ), args.out)
    return EXIT_DISHONEST if dishonest else EXIT_OK


def bloch_witness(rho) -> str:
    return ", ".join(f"{v:.6f}" for v in bloch_vector(rho))


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("honesty-check", help="certify and sample the honesty of an approximation")
    parser.add_argument("approximation", type=Path, help="channel file of the approximation")
    parser.add_argument("channel", type=Path, help="channel file of the true channel")
    parser.add_argument("--samples", type=int, help="Haar-random states (HONEST_SAMPLES, default 10000)")
    parser.add_argument("--seed", type=int, help="sampler seed (HONEST_SEED, default 0)")
    parser.add_argument("--out", type=Path, help="write the report as JSON")
    parser.set_defaults(handler=run)
