"""
Dense linear algebra primitives for one- and two-qubit problems

Matrices are plain numpy arrays. Functions never modify their inputs.
"""
from functools import reduce
from typing import Sequence, Tuple

import numpy as np

from honestnoise.core.errors import NonFiniteError, NonSquareError, NotHermitianError

HERMITICITY_TOL = 1e-10
PSD_TOL = 1e-9
TP_TOL = 1e-9
UNITARY_TOL = 1e-10


def as_matrix(m, dtype=complex) -> np.ndarray:
    """
    Convert input to a finite 2-D array

    Args:
        m: Array-like matrix
        dtype: Target dtype, complex by default

    Returns:
        A fresh 2-D array

    Raises:
        NonFiniteError: If any entry is NaN or Inf
        ValueError: If the input is not two-dimensional
    """
    arr = np.array(m, dtype=dtype)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("matrix has non-finite entries")
    return arr


def frozen(m: np.ndarray) -> np.ndarray:
    """Return a read-only copy of ``m``"""
    arr = np.array(m)
    arr.setflags(write=False)
    return arr


def _require_square(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {m.shape}")


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def hermitian_part(m: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """
    Check Hermiticity within ``tol`` and return the symmetrized matrix

    Raises:
        NonSquareError: If ``m`` is not square
        NotHermitianError: If max |m - m^dagger| exceeds ``tol``
    """
    m = np.asarray(m)
    _require_square(m)
    asymmetry = float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0
    if asymmetry > tol:
        raise NotHermitianError(f"matrix asymmetry {asymmetry:.3e} exceeds {tol:.1e}")
    return (m + dagger(m)) / 2


def eig_hermitian(m, tol: float = HERMITICITY_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a Hermitian matrix

    Args:
        m: Square matrix, Hermitian within ``tol``
        tol: Hermiticity tolerance

    Returns:
        (eigenvalues ascending, unitary matrix whose columns are eigenvectors)

    Raises:
        NonSquareError: If ``m`` is not square
        NotHermitianError: If ``m`` is not Hermitian within ``tol``
    """
    h = hermitian_part(np.asarray(m, dtype=complex), tol)
    eigenvalues, eigenvectors = np.linalg.eigh(h)
    return eigenvalues, eigenvectors


def singular_values(m) -> np.ndarray:
    return np.linalg.svd(np.asarray(m, dtype=complex), compute_uv=False)


def trace_norm(m) -> float:
    """
    Trace (Schatten-1) norm, the sum of singular values

    Raises:
        NonSquareError: If ``m`` is not square
    """
    m = np.asarray(m, dtype=complex)
    _require_square(m)
    return float(np.sum(singular_values(m)))


def min_eigenvalue(m, tol: float = HERMITICITY_TOL) -> float:
    eigenvalues, _ = eig_hermitian(m, tol)
    return float(eigenvalues[0])


def is_psd(m, tol: float = PSD_TOL) -> bool:
    """
    Positive semidefiniteness test

    Args:
        m: Hermitian matrix
        tol: Smallest eigenvalue may be as low as ``-tol``

    Returns:
        True iff the minimum eigenvalue is at least ``-tol``

    Raises:
        NotHermitianError: If ``m`` is not Hermitian
    """
    return min_eigenvalue(m) >= -tol


def kron(*ops) -> np.ndarray:
    """Kronecker product of one or more matrices, left factor most significant"""
    if not ops:
        raise ValueError("kron needs at least one operand")
    return reduce(np.kron, [np.asarray(op) for op in ops])


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))) <= tol)


def partial_trace(m, dims: Sequence[int], keep: int) -> np.ndarray:
    """
    Partial trace of a bipartite operator

    Args:
        m: Operator on a (dims[0] x dims[1])-dimensional space
        dims: Subsystem dimensions, first factor most significant
        keep: Index of the subsystem to keep (0 or 1)

    Returns:
        The reduced operator on subsystem ``keep``
    """
    d0, d1 = dims
    m = np.asarray(m).reshape(d0, d1, d0, d1)
    if keep == 0:
        return np.einsum("ajbj->ab", m)
    return np.einsum("iaib->ab", m)
