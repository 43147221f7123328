"""
Pauli twirling

The twirl of L averages P^dagger L(P rho P^dagger) P over the n-qubit Pauli
group. In the chi representation that average simply drops every
off-diagonal element, which is how it is computed here; the group average is
kept as an oracle.
"""
import logging
import math

import numpy as np

from honestnoise.core.channels import (
    ChiMatrix,
    QuantumChannel,
    apply_channel,
    kraus_to_chi,
    pauli_basis,
    require_trace_preserving,
)
from honestnoise.core.honesty import haar_pure_states

logger = logging.getLogger(__name__)


def twirled_chi(ch: QuantumChannel) -> ChiMatrix:
    """Diagonal part of the channel's chi matrix"""
    chi = kraus_to_chi(ch)
    diag = np.clip(chi.diagonal(), 0.0, None)
    return ChiMatrix(ch.n_qubits, np.diag(diag).astype(complex))


def pauli_twirl(ch: QuantumChannel) -> QuantumChannel:
    """
    Pauli-twirled channel rho -> sum_m chi_mm s_m rho s_m

    Raises:
        InvalidChannelError: If the channel is not trace preserving
    """
    diag = twirled_chi(ch).diagonal()
    basis = pauli_basis(ch.n_qubits)
    ops = tuple(math.sqrt(w) * basis[m] for m, w in enumerate(diag) if w > 0)
    return QuantumChannel(ops)


def group_average_twirl(ch: QuantumChannel) -> QuantumChannel:
    """Twirl as the uniform average over conjugation by every Pauli"""
    require_trace_preserving(ch)
    basis = pauli_basis(ch.n_qubits)
    scale = 1.0 / math.sqrt(len(basis))
    ops = tuple(scale * p @ k @ p for p in basis for k in ch.kraus_ops)
    return QuantumChannel(ops)


def twirl_equivalence_check(ch: QuantumChannel, n_samples: int = 100, seed: int = 0) -> float:
    """Largest trace-norm gap between the two twirl constructions over random pure states"""
    states = haar_pure_states(ch.n_qubits, n_samples, seed)
    diff = apply_channel(group_average_twirl(ch), states) - apply_channel(pauli_twirl(ch), states)
    diff = (diff + np.conj(np.swapaxes(diff, -1, -2))) / 2
    deviation = float(np.max(np.sum(np.abs(np.linalg.eigvalsh(diff)), axis=-1)))
    logger.debug("twirl equivalence over %d states: %.3e", n_samples, deviation)
    return deviation
