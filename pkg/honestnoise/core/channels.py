"""
Quantum channel data model and conversions between Kraus, Choi, chi
(Pauli-basis process matrix), Pauli transfer matrix and Bloch affine map
representations.

Conventions:
    - Pauli labels are lexicographic in I, X, Y, Z per qubit, most
      significant qubit first (``II, IX, ..., ZZ``).
    - Choi matrices are ordered input (x) output:
      ``J = sum_ij |i><j| (x) L(|i><j|)``.
    - chi is normalized so that ``L(rho) = sum_mn chi_mn s_m rho s_n^dagger``
      with unnormalized Paulis; its trace is 1 for trace-preserving maps.
    - Bloch vectors use ``rho = (1 + r.s) / 2^n`` with ``r_i = tr(s_i rho)``.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from honestnoise.core.errors import (
    DimensionMismatchError,
    InvalidChannelError,
    InvalidChiError,
    NotTracePreservingError,
)
from honestnoise.core.linalg import (
    PSD_TOL,
    TP_TOL,
    as_matrix,
    dagger,
    eig_hermitian,
    frozen,
    hermitian_part,
    kron,
    partial_trace,
)

logger = logging.getLogger(__name__)

SINGLE_QUBIT_PAULIS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

KRAUS_CUTOFF = 1e-12


def _qubits_for_dim(dim: int) -> int:
    n = int(round(np.log2(dim))) if dim > 0 else -1
    if n < 1 or 2**n != dim:
        raise InvalidChannelError(f"dimension {dim} is not a power of two")
    return n


@lru_cache(maxsize=None)
def pauli_labels(n_qubits: int) -> Tuple[str, ...]:
    """Pauli labels for ``n_qubits`` in lexicographic order"""
    return tuple("".join(p) for p in itertools.product("IXYZ", repeat=n_qubits))


def pauli_matrix(label: str) -> np.ndarray:
    """Matrix of a Pauli string such as ``"XZ"``"""
    try:
        return kron(*[SINGLE_QUBIT_PAULIS[c] for c in label.upper()])
    except KeyError:
        raise ValueError(f"invalid Pauli label: {label!r}")


@lru_cache(maxsize=None)
def pauli_basis(n_qubits: int) -> np.ndarray:
    """Read-only array of shape (4^n, 2^n, 2^n) holding the Pauli basis"""
    return frozen(np.stack([pauli_matrix(label) for label in pauli_labels(n_qubits)]))


@lru_cache(maxsize=None)
def _choi_basis(n_qubits: int) -> np.ndarray:
    # columns v_m = vec_row(s_m^T), so J = V chi V^dagger
    basis = pauli_basis(n_qubits)
    return frozen(np.stack([s.T.reshape(-1) for s in basis], axis=1))


@lru_cache(maxsize=None)
def _vec_basis(n_qubits: int) -> np.ndarray:
    # columns u_j = vec_row(s_j), so R = U^dagger S U / d
    basis = pauli_basis(n_qubits)
    return frozen(np.stack([s.reshape(-1) for s in basis], axis=1))


@lru_cache(maxsize=None)
def _superop_basis(n_qubits: int) -> np.ndarray:
    # T[m, n] = s_m (x) conj(s_n), the row-major superoperator of rho -> s_m rho s_n^dagger
    basis = pauli_basis(n_qubits)
    d = 2**n_qubits
    k = len(basis)
    t = np.einsum("mab,ncd->mnacbd", basis, basis.conj()).reshape(k, k, d * d, d * d)
    return frozen(t)


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """Completely positive map stored as a list of Kraus operators"""

    kraus_ops: Tuple[np.ndarray, ...]
    n_qubits: int = field(init=False)
    checked: bool = field(default=True, compare=False)

    def __post_init__(self):
        if len(self.kraus_ops) == 0:
            raise InvalidChannelError("a channel needs at least one Kraus operator")
        try:
            ops = tuple(frozen(as_matrix(k)) for k in self.kraus_ops)
        except ValueError as e:
            raise InvalidChannelError(f"invalid Kraus operator: {e}")
        dim = ops[0].shape[0]
        for k in ops:
            if k.shape != (dim, dim):
                raise InvalidChannelError(
                    f"Kraus operators must all be {dim}x{dim}, got {k.shape}"
                )
        object.__setattr__(self, "kraus_ops", ops)
        object.__setattr__(self, "n_qubits", _qubits_for_dim(dim))
        if self.checked:
            defect = trace_preservation_defect(ops)
            if defect > TP_TOL:
                raise InvalidChannelError(f"Kraus operators are not trace preserving (defect {defect:.3e})")

    @classmethod
    def from_kraus(cls, ops: Sequence, validate: bool = True) -> "QuantumChannel":
        return cls(tuple(ops), checked=validate)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


@dataclass(frozen=True, eq=False)
class ChiMatrix:
    """Process matrix in the Pauli basis"""

    n_qubits: int
    chi: np.ndarray

    def __post_init__(self):
        chi = as_matrix(self.chi)
        k = 4**self.n_qubits
        if chi.shape != (k, k):
            raise InvalidChiError(f"chi for {self.n_qubits} qubit(s) must be {k}x{k}, got {chi.shape}")
        object.__setattr__(self, "chi", frozen(chi))

    @property
    def labels(self) -> Tuple[str, ...]:
        return pauli_labels(self.n_qubits)

    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.chi)).copy()

    def entry(self, row: str, col: Optional[str] = None) -> complex:
        """Entry addressed by Pauli labels, e.g. ``entry("II", "XX")``"""
        labels = self.labels
        return complex(self.chi[labels.index(row.upper()), labels.index((col or row).upper())])


@dataclass(frozen=True, eq=False)
class PauliTransferMatrix:
    """Real matrix with entries R_ij = tr(s_i L(s_j)) / 2^n"""

    n_qubits: int
    r: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "r", frozen(np.asarray(self.r, dtype=float)))

    def is_diagonal(self, tol: float = 1e-9) -> bool:
        return bool(np.max(np.abs(self.r - np.diag(np.diag(self.r)))) <= tol)


@dataclass(frozen=True, eq=False)
class BlochAffineMap:
    """Action r -> m r + t on (generalized) Bloch vectors"""

    m: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "m", frozen(np.asarray(self.m, dtype=float)))
        object.__setattr__(self, "t", frozen(np.asarray(self.t, dtype=float)))

    @property
    def dim(self) -> int:
        return self.m.shape[0]

    def is_unital(self, tol: float = 1e-9) -> bool:
        return float(np.linalg.norm(self.t)) <= tol

    def apply(self, r: np.ndarray) -> np.ndarray:
        """Map one vector, or a stack of row vectors"""
        r = np.asarray(r, dtype=float)
        return r @ self.m.T + self.t


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Density operator on n qubits"""

    n_qubits: int
    rho: np.ndarray

    def __post_init__(self):
        rho = hermitian_part(as_matrix(self.rho))
        d = 2**self.n_qubits
        if rho.shape != (d, d):
            raise DimensionMismatchError(f"density matrix for {self.n_qubits} qubit(s) must be {d}x{d}")
        if abs(np.trace(rho) - 1) > 1e-10:
            raise ValueError(f"density matrix trace is {np.trace(rho).real:.12f}, expected 1")
        if np.linalg.eigvalsh(rho)[0] < -PSD_TOL:
            raise ValueError("density matrix is not positive semidefinite")
        object.__setattr__(self, "rho", frozen(rho))

    @classmethod
    def pure(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).reshape(-1)
        psi = psi / np.linalg.norm(psi)
        return cls(_qubits_for_dim(psi.size), np.outer(psi, psi.conj()))

    @classmethod
    def from_bloch(cls, r) -> "DensityMatrix":
        r = np.asarray(r, dtype=float)
        n_qubits = {3: 1, 15: 2}.get(r.size)
        if n_qubits is None:
            raise DimensionMismatchError(f"no qubit register has a {r.size}-dimensional Bloch vector")
        return cls(n_qubits, density_from_bloch(r, n_qubits))

    def bloch(self) -> np.ndarray:
        return bloch_vector(self.rho)


@dataclass(frozen=True, eq=False)
class CptpReport:
    """Diagnostics produced by validate_cptp"""

    passed: bool
    tp_defect: float
    choi_min_eig: float
    messages: Tuple[str, ...] = ()


def trace_preservation_defect(kraus_ops: Sequence[np.ndarray]) -> float:
    total = sum(dagger(k) @ k for k in kraus_ops)
    return float(np.max(np.abs(total - np.eye(total.shape[0]))))


def require_trace_preserving(ch: QuantumChannel) -> None:
    if not ch.checked:
        defect = trace_preservation_defect(ch.kraus_ops)
        if defect > TP_TOL:
            raise InvalidChannelError(f"channel is not trace preserving (defect {defect:.3e})")


def identity_channel(n_qubits: int = 1) -> QuantumChannel:
    return QuantumChannel((np.eye(2**n_qubits, dtype=complex),))


def unitary_channel(u) -> QuantumChannel:
    """Channel rho -> U rho U^dagger"""
    return QuantumChannel((as_matrix(u),))


def apply_channel(ch: QuantumChannel, rho) -> np.ndarray:
    """
    Apply a channel to one density matrix or a stack of them

    Args:
        ch: Channel
        rho: Array of shape (d, d) or (N, d, d)

    Returns:
        Output array with the same shape as ``rho``

    Raises:
        DimensionMismatchError: If ``rho`` does not act on the channel's space
    """
    rho = np.asarray(rho.rho if isinstance(rho, DensityMatrix) else rho, dtype=complex)
    if rho.shape[-2:] != (ch.dim, ch.dim):
        raise DimensionMismatchError(f"state of shape {rho.shape[-2:]} does not fit a {ch.dim}-dimensional channel")
    ops = np.stack(ch.kraus_ops)
    if rho.ndim == 2:
        return np.einsum("kab,bc,kdc->ad", ops, rho, ops.conj())
    return np.einsum("kab,nbc,kdc->nad", ops, rho, ops.conj())


def compose(first: QuantumChannel, second: QuantumChannel) -> QuantumChannel:
    """Channel applying ``first`` then ``second``"""
    if first.n_qubits != second.n_qubits:
        raise DimensionMismatchError("cannot compose channels on different numbers of qubits")
    ops = [l @ k for l in second.kraus_ops for k in first.kraus_ops]
    return QuantumChannel(tuple(ops))


def kraus_to_choi(ch: QuantumChannel) -> np.ndarray:
    """
    Choi matrix J = sum_ij |i><j| (x) L(|i><j|) of a channel

    Raises:
        InvalidChannelError: If the channel is not trace preserving
    """
    require_trace_preserving(ch)
    return _choi_from_kraus(ch.kraus_ops)


def _choi_from_kraus(kraus_ops: Sequence[np.ndarray]) -> np.ndarray:
    vecs = np.stack([np.asarray(k).T.reshape(-1) for k in kraus_ops], axis=1)
    return vecs @ dagger(vecs)


def choi_to_chi(choi: np.ndarray, n_qubits: int) -> ChiMatrix:
    v = _choi_basis(n_qubits)
    d = 2**n_qubits
    return ChiMatrix(n_qubits, dagger(v) @ np.asarray(choi) @ v / d**2)


def chi_to_choi(chi: ChiMatrix) -> np.ndarray:
    v = _choi_basis(chi.n_qubits)
    return v @ chi.chi @ dagger(v)


def kraus_to_chi(ch: QuantumChannel) -> ChiMatrix:
    """
    Pauli-basis process matrix of a channel

    Raises:
        InvalidChannelError: If the channel is not trace preserving
    """
    require_trace_preserving(ch)
    basis = pauli_basis(ch.n_qubits)
    coeffs = np.einsum("mab,kba->km", basis, np.stack(ch.kraus_ops)) / ch.dim
    return ChiMatrix(ch.n_qubits, coeffs.T @ coeffs.conj())


def chi_to_kraus(chi: ChiMatrix, cutoff: float = KRAUS_CUTOFF) -> QuantumChannel:
    """
    Kraus operators from the eigendecomposition of chi

    Eigenvectors are taken in ascending eigenvalue order, each with its first
    nonzero entry made real positive, so the output is deterministic.

    Raises:
        InvalidChiError: If chi is not Hermitian or has a significantly
            negative eigenvalue
    """
    try:
        eigenvalues, eigenvectors = eig_hermitian(chi.chi, tol=1e-9)
    except ValueError as e:
        raise InvalidChiError(str(e))
    if eigenvalues[0] < -PSD_TOL:
        raise InvalidChiError(f"chi has negative eigenvalue {eigenvalues[0]:.3e}; map is not CP")
    basis = pauli_basis(chi.n_qubits)
    ops = []
    for lam, u in zip(eigenvalues, eigenvectors.T):
        if lam <= cutoff:
            continue
        lead = u[np.argmax(np.abs(u) > 1e-12)]
        u = u * (np.conj(lead) / abs(lead))
        ops.append(np.sqrt(lam) * np.einsum("m,mab->ab", u, basis))
    return QuantumChannel(tuple(ops))


def chi_to_ptm(chi: ChiMatrix) -> PauliTransferMatrix:
    """
    Pauli transfer matrix from chi

    Raises:
        InvalidChiError: If the resulting matrix is not real within 1e-9
    """
    n = chi.n_qubits
    d = 2**n
    superop = np.einsum("mn,mnab->ab", chi.chi, _superop_basis(n))
    u = _vec_basis(n)
    r = dagger(u) @ superop @ u / d
    if np.max(np.abs(r.imag)) > 1e-9:
        raise InvalidChiError("chi does not describe a Hermiticity-preserving map")
    return PauliTransferMatrix(n, r.real)


def ptm_to_chi(ptm: PauliTransferMatrix) -> ChiMatrix:
    n = ptm.n_qubits
    d = 2**n
    u = _vec_basis(n)
    superop = u @ ptm.r @ dagger(u) / d
    chi = np.einsum("mnab,ab->mn", _superop_basis(n).conj(), superop) / d**2
    return ChiMatrix(n, chi)


def kraus_to_ptm(ch: QuantumChannel) -> PauliTransferMatrix:
    return chi_to_ptm(kraus_to_chi(ch))


def ptm_to_bloch(ptm: PauliTransferMatrix, tol: float = TP_TOL) -> BlochAffineMap:
    """
    Split a trace-preserving PTM into its Bloch matrix and translation

    Raises:
        NotTracePreservingError: If the first row is not (1, 0, ..., 0)
    """
    first_row = np.zeros(ptm.r.shape[1])
    first_row[0] = 1.0
    defect = float(np.max(np.abs(ptm.r[0] - first_row)))
    if defect > tol:
        raise NotTracePreservingError(f"PTM first row deviates from (1, 0, ..., 0) by {defect:.3e}")
    return BlochAffineMap(ptm.r[1:, 1:], ptm.r[1:, 0])


def bloch_map(ch: QuantumChannel) -> BlochAffineMap:
    """Bloch affine map of a channel"""
    return ptm_to_bloch(kraus_to_ptm(ch))


def average_fidelity(chi: ChiMatrix) -> float:
    """Haar-averaged fidelity (d chi_00 + 1) / (d + 1)"""
    d = 2**chi.n_qubits
    chi00 = chi.chi[0, 0]
    if abs(chi00.imag) > 1e-9 or chi00.real < -PSD_TOL:
        raise InvalidChiError(f"chi_00 must be real and nonnegative, got {chi00}")
    return float((d * chi00.real + 1) / (d + 1))


def bloch_vector(rho) -> np.ndarray:
    """Generalized Bloch vector r_i = tr(s_i rho), i >= 1, for one state or a stack"""
    rho = np.asarray(rho, dtype=complex)
    n = _qubits_for_dim(rho.shape[-1])
    basis = pauli_basis(n)[1:]
    return np.real(np.einsum("iab,...ba->...i", basis, rho))


def density_from_bloch(r, n_qubits: int = 1) -> np.ndarray:
    """Operator (1 + r.s) / 2^n for one vector or a stack of row vectors"""
    r = np.asarray(r, dtype=float)
    basis = pauli_basis(n_qubits)
    d = 2**n_qubits
    return (np.eye(d) + np.einsum("...i,iab->...ab", r, basis[1:])) / d


def validate_cptp(target: Union[QuantumChannel, np.ndarray], n_qubits: Optional[int] = None) -> CptpReport:
    """
    Report trace-preservation defect and Choi minimum eigenvalue

    Args:
        target: A channel (possibly built unchecked) or a Choi matrix of a
            Hermiticity-preserving map
        n_qubits: Required only to override the qubit count inferred from a
            Choi matrix

    Returns:
        CptpReport with pass/fail verdict and diagnostic messages
    """
    messages: List[str] = []
    if isinstance(target, QuantumChannel):
        choi = _choi_from_kraus(target.kraus_ops)
        d = target.dim
    else:
        choi = np.asarray(target, dtype=complex)
        d = int(round(np.sqrt(choi.shape[0])))
        if n_qubits is not None:
            d = 2**n_qubits
    reduced = partial_trace(choi, (d, d), keep=0)
    tp_defect = float(np.max(np.abs(reduced - np.eye(d))))
    choi_min_eig = float(np.linalg.eigvalsh(hermitian_part(choi, tol=1e-8))[0])
    if tp_defect > TP_TOL:
        messages.append(f"trace-preservation defect {tp_defect:.3e} exceeds {TP_TOL:.0e}")
    if choi_min_eig < -PSD_TOL:
        messages.append(f"Choi matrix has negative eigenvalue {choi_min_eig:.3e}; map is not completely positive")
    passed = not messages
    logger.debug("validate_cptp: tp_defect=%.3e choi_min_eig=%.3e passed=%s", tp_defect, choi_min_eig, passed)
    return CptpReport(passed, tp_defect, choi_min_eig, tuple(messages))
