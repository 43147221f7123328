"""
Pydantic models for the documents honestnoise reads and writes
"""
import hashlib
from datetime import datetime, timezone
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from honestnoise.core import config
from honestnoise.core.channels import QuantumChannel
from honestnoise.core.errors import DimensionMismatchError
from honestnoise.core.zoo import build_preset

ComplexEntry = Tuple[float, float]
MatrixDocument = List[List[ComplexEntry]]


def encode_matrix(m) -> MatrixDocument:
    """Row-major matrix with every entry written as an [re, im] pair"""
    m = np.asarray(m, dtype=complex)
    return [[(float(z.real), float(z.imag)) for z in row] for row in m]


def decode_matrix(doc: Sequence[Sequence[Sequence[float]]]) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in doc], dtype=complex)


def utc_timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class ChannelDocument(BaseModel):
    """Channel file: explicit Kraus operators or a named preset"""
    model_config = ConfigDict(extra="forbid")

    label: Optional[str] = None
    n_qubits: Optional[int] = Field(default=None, ge=1, le=2)
    kraus: Optional[List[MatrixDocument]] = None
    preset: Optional[str] = None
    params: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _exactly_one_source(self) -> "ChannelDocument":
        if (self.kraus is None) == (self.preset is None):
            raise ValueError("exactly one of 'kraus' or 'preset' must be given")
        if self.kraus is not None:
            if self.n_qubits is None:
                raise ValueError("'n_qubits' is required with 'kraus'")
            if not self.kraus:
                raise ValueError("'kraus' must list at least one operator")
            d = 2**self.n_qubits
            for k, op in enumerate(self.kraus):
                if len(op) != d or any(len(row) != d for row in op):
                    raise ValueError(f"Kraus operator {k} must be {d}x{d} for {self.n_qubits} qubit(s)")
        return self

    def to_channel(self) -> QuantumChannel:
        """
        Build and validate the described channel

        Raises:
            DimensionMismatchError: If a preset builds a channel on other than ``n_qubits`` qubits
        """
        if self.preset is not None:
            ch = build_preset(self.preset, self.params)
            if self.n_qubits is not None and ch.n_qubits != self.n_qubits:
                raise DimensionMismatchError(
                    f"preset '{self.preset}' acts on {ch.n_qubits} qubit(s), document says n_qubits={self.n_qubits}"
                )
            return ch
        return QuantumChannel(tuple(decode_matrix(op) for op in self.kraus))

    @classmethod
    def from_channel(cls, ch: QuantumChannel, label: Optional[str] = None) -> "ChannelDocument":
        return cls(label=label, n_qubits=ch.n_qubits, kraus=[encode_matrix(k) for k in ch.kraus_ops])

    def digest(self) -> str:
        """md5 of the canonical JSON form, used to identify report inputs"""
        content = self.model_dump_json(exclude={"label"})
        return hashlib.md5(content.encode()).hexdigest()


class MixingSetDocument(BaseModel):
    """Custom mixing set: labelled unitaries, the identity among them"""
    model_config = ConfigDict(extra="forbid")

    labels: List[str]
    unitaries: List[MatrixDocument]

    @model_validator(mode="after")
    def _labels_match(self) -> "MixingSetDocument":
        if len(self.labels) != len(self.unitaries):
            raise ValueError("'labels' and 'unitaries' must have the same length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("mixing-set labels must be unique")
        return self

    def matrices(self) -> List[np.ndarray]:
        return [decode_matrix(u) for u in self.unitaries]


class OptimizerOptions(BaseModel):
    """Settings of one approximation run; recorded verbatim in reports"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = Field(default_factory=config.get_default_seed)
    restarts: int = Field(default_factory=config.get_default_restarts, ge=1)
    max_iter: int = Field(default_factory=config.get_default_max_iter, ge=1)
    penalty: float = Field(default_factory=config.get_default_penalty, gt=0)
    workers: int = Field(default_factory=config.get_default_workers, ge=1)
    empirical_samples: int = Field(default_factory=config.get_default_samples, ge=0)
    tie_tol: float = Field(default=1e-8, ge=0)
    bisection_tol: float = Field(default=1e-10, gt=0)
    certificate_tol: float = Field(default=1e-9, ge=0)


class SolverModel(BaseModel):
    primal: float
    dual: float
    gap: float
    iterations: int
    status: str


class CertificateModel(BaseModel):
    mode: str
    verdict: str
    min_eig_a_minus_b: float
    tol: float
    witness: List[float]


class EmpiricalModel(BaseModel):
    n_states: int
    seed: int
    max_violation: float
    threshold: float
    violated: bool
    witness_state: Optional[MatrixDocument] = None


class TraceModel(BaseModel):
    restarts: int
    iterations: List[int]
    best_per_restart: List[Optional[float]]
    bisection_steps: int
    failed_restarts: int = 0


class RunReport(BaseModel):
    """Self-contained record of an approximation run"""

    tool_version: str
    created_at: str = Field(default_factory=utc_timestamp)
    channel_label: Optional[str] = None
    channel_digest: str
    mixing_set: List[str]
    options: OptimizerOptions
    probs: List[float]
    chi_labels: List[str]
    chi_diag: List[float]
    diamond_dist: float
    solver: SolverModel
    certificate: CertificateModel
    empirical: Optional[EmpiricalModel] = None
    trace: TraceModel
    mixture: ChannelDocument
    notes: List[str] = Field(default_factory=list)


class GoldenCell(BaseModel):
    """One published table value with its provenance"""
    model_config = ConfigDict(frozen=True)

    table: int = Field(ge=1, le=5)
    row: str
    column: str
    value: float
    tol: float = Field(gt=0)
    provenance: str


class TableCell(BaseModel):
    table: int
    row: str
    column: str
    computed: float
    published: float
    deviation: float
    tol: float
    passed: bool
    provenance: str


class TableComparison(BaseModel):
    tool_version: str
    created_at: str = Field(default_factory=utc_timestamp)
    tables: List[int]
    options: OptimizerOptions
    cells: List[TableCell]

    @property
    def passed(self) -> bool:
        return all(cell.passed for cell in self.cells)

    @property
    def worst_deviation(self) -> float:
        return max((cell.deviation for cell in self.cells), default=0.0)


class DiamondReport(BaseModel):
    value: float
    primal: float
    dual: float
    gap: float
    iterations: int
    lower_bound: Optional[float] = None


class HonestyReport(BaseModel):
    approximation_label: Optional[str] = None
    channel_label: Optional[str] = None
    certificate: Optional[CertificateModel] = None
    empirical: EmpiricalModel
    honest: bool


class TwirlReport(BaseModel):
    channel_label: Optional[str] = None
    chi_labels: List[str]
    chi_diag: List[float]
    twirl_distance: float
    twirl_to_identity: float
    channel_to_identity: float
    pauli_distance: Optional[float] = None
    pauli_to_identity: Optional[float] = None
    equivalence_deviation: float
    twirled: ChannelDocument
