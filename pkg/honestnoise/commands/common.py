"""
Shared plumbing for the sub-commands: document loading, option parsing,
report serialization and the exit-code contract
"""
import argparse
import functools
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Optional, Tuple

from pydantic import BaseModel, ValidationError

from honestnoise.core.approximator import (
    MIXING_SET_NAMES,
    MixingSet,
    custom_mixing_set,
    mixing_set,
    sparse_pauli_set,
)
from honestnoise.core.channels import QuantumChannel
from honestnoise.core.diamond import SdpSolution
from honestnoise.core.errors import InfeasibleError, ParseError, SolverFailureError
from honestnoise.core.honesty import EmpiricalReport, HonestyCertificate
from honestnoise.models.schemas import (
    CertificateModel,
    ChannelDocument,
    EmpiricalModel,
    MixingSetDocument,
    OptimizerOptions,
    SolverModel,
    encode_matrix,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_INFEASIBLE = 2
EXIT_SOLVER = 3
EXIT_DISHONEST = 4
EXIT_MISMATCH = 5


def _parse_json(path: Path) -> object:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: {e.msg}", line=e.lineno, column=e.colno)


def load_channel(path: Path) -> Tuple[ChannelDocument, QuantumChannel]:
    """
    Parse a channel file and build the channel it describes

    Raises:
        ParseError: On malformed JSON, schema violations or an invalid channel
    """
    raw = _parse_json(path)
    try:
        document = ChannelDocument.model_validate(raw)
    except ValidationError as e:
        raise ParseError(f"{path}: invalid channel document: {e}")
    try:
        channel = document.to_channel()
    except ValueError as e:
        raise ParseError(f"{path}: {e}")
    if document.label is None:
        document = document.model_copy(update={"label": path.stem})
    return document, channel


def load_mixing_set(choice: str, n_qubits: int) -> MixingSet:
    """
    A registered mixing-set name, or the path of a mixing-set document

    Raises:
        ParseError: If the document is malformed
    """
    if choice in MIXING_SET_NAMES:
        return mixing_set(choice, n_qubits)
    path = Path(choice)
    raw = _parse_json(path)
    try:
        document = MixingSetDocument.model_validate(raw)
        return custom_mixing_set(document.labels, document.matrices())
    except ValueError as e:
        raise ParseError(f"{path}: invalid mixing set: {e}")


def resolve_mixing_set(args: argparse.Namespace, n_qubits: int) -> MixingSet:
    if args.support:
        return sparse_pauli_set([label.strip() for label in args.support.split(",")])
    return load_mixing_set(args.set, n_qubits)


def add_optimizer_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("optimizer")
    group.add_argument("--seed", type=int, help="base seed (HONEST_SEED, default 0)")
    group.add_argument("--restarts", type=int, help="multi-start restarts (HONEST_RESTARTS, default 16)")
    group.add_argument("--max-iter", type=int, help="Nelder-Mead iteration cap (HONEST_MAX_ITER, default 2000)")
    group.add_argument("--penalty", type=float, help="honesty penalty weight (HONEST_PENALTY, default 1e3)")
    group.add_argument("--workers", type=int, help="parallel restart processes (HONEST_WORKERS, default 1)")
    group.add_argument("--samples", type=int, help="states in the empirical check (HONEST_SAMPLES, default 10000)")


def options_from_args(args: argparse.Namespace) -> OptimizerOptions:
    """Command-line values override environment defaults"""
    overrides = {
        "seed": args.seed,
        "restarts": args.restarts,
        "max_iter": args.max_iter,
        "penalty": args.penalty,
        "workers": args.workers,
        "empirical_samples": args.samples,
    }
    try:
        return OptimizerOptions(**{k: v for k, v in overrides.items() if v is not None})
    except ValidationError as e:
        raise ParseError(f"invalid optimizer options: {e}")


def certificate_model(certificate: HonestyCertificate) -> CertificateModel:
    return CertificateModel(
        mode=certificate.mode.value,
        verdict=certificate.verdict,
        min_eig_a_minus_b=certificate.min_eig_a_minus_b,
        tol=certificate.tol,
        witness=[float(v) for v in certificate.witness],
    )


def empirical_model(report: EmpiricalReport) -> EmpiricalModel:
    witness = report.violating_state
    return EmpiricalModel(
        n_states=report.n_states,
        seed=report.seed,
        max_violation=report.max_violation,
        threshold=report.threshold,
        violated=report.violated,
        witness_state=encode_matrix(witness) if witness is not None else None,
    )


def solver_model(solution: SdpSolution) -> SolverModel:
    return SolverModel(
        primal=solution.primal,
        dual=solution.dual,
        gap=solution.gap,
        iterations=solution.iterations,
        status=solution.status.value,
    )


def emit(model: BaseModel, out: Optional[Path]) -> None:
    """Write a report to ``out``, or to stdout when no path is given"""
    content = model.model_dump_json(indent=2)
    if out is None:
        print(content)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(content + "\n", encoding="utf-8")
    print(f"report written to {out}")


def exit_codes(handler: Callable[[argparse.Namespace], int]) -> Callable[[argparse.Namespace], int]:
    """Translate errors raised by a handler into the exit-code contract"""

    @functools.wraps(handler)
    def wrapper(args: argparse.Namespace) -> int:
        try:
            return handler(args)
        except ParseError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_PARSE
        except InfeasibleError as e:
            print(f"infeasible: {e}", file=sys.stderr)
            return EXIT_INFEASIBLE
        except SolverFailureError as e:
            print(f"solver failure: {e}", file=sys.stderr)
            return EXIT_SOLVER
        except ValueError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_PARSE

    return wrapper
