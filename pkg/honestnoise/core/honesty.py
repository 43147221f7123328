"""
Honesty constraint machinery

An approximation L_A is honest for L when, for every state rho,
||(L_A - I)(rho)||_1 >= ||(L - I)(rho)||_1. For qubit channels this reduces to
the quadratic-form condition A >= B on the Bloch representation, with

    A = (1 - M_A)^T (1 - M_A)
    B = (1 - M)^T (1 - M)                          unital L
    B = (1 - M)^T (1 - M) + (|t|^2 + 2|v|) 1       non-unital L, v = (1 - M)^T t

On more than one qubit the same test is applied to the generalized Bloch
(coherence) vector; there it is only conjectured to imply honesty, so it is
always paired with a sampled check.
"""
import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from honestnoise.core.channels import (
    DensityMatrix,
    QuantumChannel,
    apply_channel,
    bloch_map,
    density_from_bloch,
    pauli_basis,
)
from honestnoise.core.errors import DimensionMismatchError, NonSquareError, NotUnitalError
from honestnoise.core.linalg import hermitian_part, trace_norm

logger = logging.getLogger(__name__)

CERTIFICATE_TOL = 1e-9
UNITAL_TOL = 1e-9
VIOLATION_TOL = 1e-9


class CertificateMode(str, Enum):
    UNITAL = "unital"
    NON_UNITAL = "non-unital"
    MULTI_QUBIT = "multi-qubit-conjectural"


@dataclass(frozen=True, eq=False)
class NonUnitalData:
    """Translation t of a channel and v = (1 - M)^T t"""

    t: np.ndarray
    v: np.ndarray

    @property
    def correction(self) -> float:
        """Scalar |t|^2 + 2|v| added to the diagonal of B"""
        return float(np.dot(self.t, self.t) + 2 * np.linalg.norm(self.v))


@dataclass(frozen=True, eq=False)
class HonestyCertificate:
    """Outcome of the A >= B test"""

    a: np.ndarray
    b: np.ndarray
    min_eig_a_minus_b: float
    tol: float
    mode: CertificateMode
    witness: np.ndarray

    @property
    def passed(self) -> bool:
        return self.min_eig_a_minus_b >= -self.tol

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def witness_state(self) -> DensityMatrix:
        """
        State along the eigenvector of A - B with the smallest eigenvalue

        For a failed single-qubit certificate this is a pure state whose
        input-output distinguishability is under-reported.
        """
        r = self.witness / np.linalg.norm(self.witness)
        n_qubits = {3: 1, 15: 2}[r.size]
        r_sigma = np.einsum("i,iab->ab", r, pauli_basis(n_qubits)[1:])
        scale = 1.0 / abs(np.linalg.eigvalsh(r_sigma)[0])
        return DensityMatrix(n_qubits, density_from_bloch(scale * r, n_qubits))


@dataclass(frozen=True, eq=False)
class EmpiricalReport:
    """Largest sampled excess of the true distinguishability over the approximation's"""

    max_violation: float
    witness: np.ndarray
    n_states: int
    seed: int
    threshold: float

    @property
    def violated(self) -> bool:
        return self.max_violation > self.threshold

    @property
    def violating_state(self) -> Optional[np.ndarray]:
        return self.witness if self.violated else None


def _state_array(rho: Union[DensityMatrix, np.ndarray]) -> np.ndarray:
    return np.asarray(rho.rho if isinstance(rho, DensityMatrix) else rho, dtype=complex)


def io_distinguishability(ch: QuantumChannel, rho: Union[DensityMatrix, np.ndarray]) -> float:
    """
    Input-output distinguishability ||L(rho) - rho||_1

    Raises:
        DimensionMismatchError: If rho does not act on the channel's space
    """
    rho = _state_array(rho)
    return trace_norm(apply_channel(ch, rho) - rho)


def io_distinguishabilities(ch: QuantumChannel, states: np.ndarray) -> np.ndarray:
    """Vectorized io_distinguishability over a stack of states (N, d, d)"""
    states = np.asarray(states, dtype=complex)
    diff = apply_channel(ch, states) - states
    diff = (diff + np.conj(np.swapaxes(diff, -1, -2))) / 2
    return np.sum(np.abs(np.linalg.eigvalsh(diff)), axis=-1)


def build_A(m_a: np.ndarray) -> np.ndarray:
    """
    A = (1 - M_A)^T (1 - M_A)

    Raises:
        NonSquareError: If m_a is not square
    """
    m_a = np.asarray(m_a, dtype=float)
    if m_a.ndim != 2 or m_a.shape[0] != m_a.shape[1]:
        raise NonSquareError(f"Bloch matrix must be square, got shape {m_a.shape}")
    g = np.eye(m_a.shape[0]) - m_a
    return g.T @ g


def build_B_unital(ch: QuantumChannel, tol: float = UNITAL_TOL) -> np.ndarray:
    """
    B = (1 - M)^T (1 - M) for a unital channel

    Raises:
        NotUnitalError: If the channel's Bloch translation exceeds ``tol``
    """
    bloch = bloch_map(ch)
    if not bloch.is_unital(tol):
        raise NotUnitalError(f"channel is not unital (|t| = {np.linalg.norm(bloch.t):.3e})")
    return build_A(bloch.m)


def non_unital_data(ch: QuantumChannel) -> NonUnitalData:
    bloch = bloch_map(ch)
    t = np.array(bloch.t)
    return NonUnitalData(t=t, v=(np.eye(bloch.dim) - bloch.m).T @ t)


def build_B_nonunital(ch: QuantumChannel) -> np.ndarray:
    """B = (1 - M)^T (1 - M) + (|t|^2 + 2|v|) 1; equals the unital form when t = 0"""
    bloch = bloch_map(ch)
    data = non_unital_data(ch)
    return build_A(bloch.m) + data.correction * np.eye(bloch.dim)


def honesty_bound(ch: QuantumChannel, tol: float = UNITAL_TOL) -> Tuple[np.ndarray, CertificateMode]:
    """The matrix B that an approximation's A must dominate, with the certificate mode"""
    bloch = bloch_map(ch)
    unital = bloch.is_unital(tol)
    b = build_A(bloch.m) if unital else build_B_nonunital(ch)
    if ch.n_qubits > 1:
        mode = CertificateMode.MULTI_QUBIT
    else:
        mode = CertificateMode.UNITAL if unital else CertificateMode.NON_UNITAL
    return b, mode


def certify_matrices(a: np.ndarray, b: np.ndarray, mode: CertificateMode,
                     tol: float = CERTIFICATE_TOL) -> HonestyCertificate:
    eigenvalues, eigenvectors = np.linalg.eigh(np.real(hermitian_part(a - b, tol=1e-8)))
    return HonestyCertificate(
        a=a,
        b=b,
        min_eig_a_minus_b=float(eigenvalues[0]),
        tol=tol,
        mode=mode,
        witness=np.real(eigenvectors[:, 0]),
    )


def certify(m_a: np.ndarray, ch: QuantumChannel, tol: float = CERTIFICATE_TOL) -> HonestyCertificate:
    """
    Test whether an approximation with Bloch matrix ``m_a`` is honest for ``ch``

    Args:
        m_a: Bloch matrix of the approximation
        ch: True channel
        tol: A - B may have eigenvalues down to ``-tol``

    Returns:
        HonestyCertificate; multi-qubit certificates are labelled conjectural

    Raises:
        DimensionMismatchError: If m_a does not match the channel's Bloch dimension
    """
    m_a = np.asarray(m_a, dtype=float)
    expected = 4**ch.n_qubits - 1
    if m_a.shape != (expected, expected):
        raise DimensionMismatchError(f"Bloch matrix must be {expected}x{expected}, got {m_a.shape}")
    b, mode = honesty_bound(ch)
    certificate = certify_matrices(build_A(m_a), b, mode, tol)
    logger.debug("certify: mode=%s min_eig=%.3e verdict=%s", mode.value, certificate.min_eig_a_minus_b,
                 certificate.verdict)
    return certificate


_SINGLE_QUBIT_EIGENSTATES = [
    np.array([1, 0]), np.array([0, 1]),
    np.array([1, 1]) / np.sqrt(2), np.array([1, -1]) / np.sqrt(2),
    np.array([1, 1j]) / np.sqrt(2), np.array([1, -1j]) / np.sqrt(2),
]


def pauli_eigenstates(n_qubits: int) -> np.ndarray:
    """All 6^n product Pauli eigenstates as density matrices"""
    vecs = []
    for combo in itertools.product(_SINGLE_QUBIT_EIGENSTATES, repeat=n_qubits):
        psi = combo[0]
        for v in combo[1:]:
            psi = np.kron(psi, v)
        vecs.append(psi.astype(complex))
    vecs = np.stack(vecs)
    return np.einsum("na,nb->nab", vecs, vecs.conj())


def haar_pure_states(n_qubits: int, n_samples: int, seed: int) -> np.ndarray:
    """Haar-random pure states from normalized complex Gaussian vectors"""
    rng = np.random.default_rng(seed)
    d = 2**n_qubits
    z = rng.standard_normal((n_samples, d)) + 1j * rng.standard_normal((n_samples, d))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return np.einsum("na,nb->nab", z, z.conj())


def sample_states(n_qubits: int, n_samples: int, seed: int) -> np.ndarray:
    return np.concatenate([pauli_eigenstates(n_qubits), haar_pure_states(n_qubits, n_samples, seed)])


def empirical_honesty_check(approx: QuantumChannel, ch: QuantumChannel, n_samples: int = 10_000,
                            seed: int = 0, threshold: float = VIOLATION_TOL) -> EmpiricalReport:
    """
    Sampled check of ||(L - I) rho||_1 <= ||(L_A - I) rho||_1

    Args:
        approx: Candidate approximation
        ch: True channel
        n_samples: Number of Haar-random pure states, in addition to the
            fixed grid of Pauli eigenstates
        seed: Seed of the state sampler
        threshold: Violations at or below this value are not reported

    Returns:
        EmpiricalReport whose max_violation is positive when some sampled
        state is better preserved by the approximation than by the channel

    Raises:
        DimensionMismatchError: If the channels act on different spaces
    """
    if approx.n_qubits != ch.n_qubits:
        raise DimensionMismatchError("approximation and channel act on different numbers of qubits")
    states = sample_states(ch.n_qubits, n_samples, seed)
    excess = io_distinguishabilities(ch, states) - io_distinguishabilities(approx, states)
    worst = int(np.argmax(excess))
    report = EmpiricalReport(
        max_violation=float(excess[worst]),
        witness=states[worst],
        n_states=len(states),
        seed=seed,
        threshold=threshold,
    )
    logger.debug("empirical check: %d states, max violation %.3e", report.n_states, report.max_violation)
    return report
