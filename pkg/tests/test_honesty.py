"""
Tests for the honesty certificate and the sampled honesty check
"""
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from honestnoise.core.channels import (
    DensityMatrix,
    QuantumChannel,
    bloch_map,
    bloch_vector,
    density_from_bloch,
    pauli_basis,
)
from honestnoise.core.errors import DimensionMismatchError, NonSquareError, NotUnitalError
from honestnoise.core.honesty import (
    CertificateMode,
    build_A,
    build_B_nonunital,
    build_B_unital,
    certify,
    certify_matrices,
    empirical_honesty_check,
    haar_pure_states,
    io_distinguishabilities,
    io_distinguishability,
    non_unital_data,
    pauli_eigenstates,
)
from honestnoise.core.twirl import pauli_twirl
from honestnoise.core.zoo import (
    make_amplitude_damping,
    make_dephase_axis,
    make_dephasing_z,
    make_depolarizing,
    make_rotation,
)
from tests.conftest import random_unit_vector


def _pauli_mixture(probs) -> QuantumChannel:
    basis = pauli_basis(1)
    return QuantumChannel(tuple(math.sqrt(p) * basis[i] for i, p in enumerate(probs) if p > 0))


def test_build_a_errors_and_values():
    with pytest.raises(NonSquareError):
        build_A(np.zeros((2, 3)))
    assert np.allclose(build_A(np.eye(3)), 0)
    assert np.allclose(build_A(0.5 * np.eye(3)), 0.25 * np.eye(3))


def test_build_b_unital_rejects_amplitude_damping():
    with pytest.raises(NotUnitalError):
        build_B_unital(make_amplitude_damping(0.1))


def test_nonunital_b_reduces_to_unital_form():
    ch = make_depolarizing(0.02)
    assert np.allclose(build_B_nonunital(ch), build_B_unital(ch))
    data = non_unital_data(make_amplitude_damping(0.2))
    assert np.allclose(data.t, [0, 0, 0.2])
    assert data.correction == pytest.approx(0.04 + 2 * 0.2 * 0.2)


def test_nonunital_b_for_full_amplitude_damping():
    """gamma = 1 collapses M to 0 with t = v = e_z, so the correction is 1 + 2"""
    ch = make_amplitude_damping(1.0)
    data = non_unital_data(ch)
    assert np.allclose(data.v, [0, 0, 1])
    assert data.correction == pytest.approx(3.0)
    assert np.allclose(build_B_nonunital(ch), 4 * np.eye(3))


def test_boundary_dephasing_is_honest_for_rotation(channels):
    """Dephasing with p = sin(theta/2) saturates the bound for the z rotation"""
    certificate = certify(bloch_map(make_dephasing_z(math.sin(0.01))).m, channels["lambda3_0"])
    assert certificate.passed
    assert certificate.mode is CertificateMode.UNITAL
    assert certificate.min_eig_a_minus_b == pytest.approx(0.0, abs=1e-12)


def test_twirl_fails_certificate_with_witness(channels):
    ch = channels["lambda3_0"]
    certificate = certify(bloch_map(pauli_twirl(ch)).m, ch)
    assert not certificate.passed
    assert certificate.verdict == "fail"
    witness = certificate.witness_state()
    assert isinstance(witness, DensityMatrix)
    assert io_distinguishability(pauli_twirl(ch), witness) < io_distinguishability(ch, witness)


def test_certify_dimension_checks(channels):
    with pytest.raises(DimensionMismatchError):
        certify(np.eye(3), channels["lambda2q"])
    certificate = certify(bloch_map(channels["lambda2q"]).m, channels["lambda2q"])
    assert certificate.mode is CertificateMode.MULTI_QUBIT
    assert certificate.passed


def test_certify_matrices_direct():
    certificate = certify_matrices(np.eye(3), 2 * np.eye(3), CertificateMode.UNITAL)
    assert certificate.min_eig_a_minus_b == pytest.approx(-1.0)
    assert not certificate.passed


def test_exact_match_identities(rng):
    """Rotation and dephasing about the same axis with p = |sin(theta/2)| are indistinguishable in IO"""
    for _ in range(50):
        theta = rng.uniform(0, math.pi)
        axis = random_unit_vector(rng)
        rotation = make_rotation(theta, axis)
        dephasing = make_dephase_axis(abs(math.sin(theta / 2)), axis)
        states = haar_pure_states(1, 20, seed=int(rng.integers(1 << 30)))
        assert np.allclose(io_distinguishabilities(rotation, states), io_distinguishabilities(dephasing, states),
                           atol=1e-10)


def test_qubit_trace_distance_is_bloch_distance(rng):
    """||rho - sigma||_1 = |r_rho - r_sigma| for qubit states"""
    r = rng.standard_normal((10_000, 2, 3))
    r *= (rng.uniform(0, 1, (10_000, 2, 1)) / np.linalg.norm(r, axis=2, keepdims=True))
    diff = density_from_bloch(r[:, 0]) - density_from_bloch(r[:, 1])
    trace_norms = np.sum(np.abs(np.linalg.eigvalsh(diff)), axis=1)
    assert np.allclose(trace_norms, np.linalg.norm(r[:, 0] - r[:, 1], axis=1), atol=1e-10)


def test_pauli_eigenstates_grid():
    states = pauli_eigenstates(2)
    assert states.shape == (36, 4, 4)
    assert np.allclose(np.trace(states, axis1=1, axis2=2), 1)
    assert np.allclose(np.abs(bloch_vector(pauli_eigenstates(1))).sum(axis=1), 1)


def test_empirical_channel_against_itself(channels):
    report = empirical_honesty_check(channels["lambda1"], channels["lambda1"], n_samples=1000, seed=3)
    assert report.max_violation == pytest.approx(0.0, abs=1e-15)
    assert not report.violated
    assert report.violating_state is None
    assert report.n_states == 1006


@pytest.mark.parametrize("label", ["lambda3_0", "lambda3_1", "lambda3_2"])
def test_twirl_is_dishonest(channels, label):
    ch = channels[label]
    report = empirical_honesty_check(pauli_twirl(ch), ch, n_samples=10_000, seed=0)
    assert report.max_violation > 1e-6
    assert report.violated
    assert report.violating_state is not None


def test_empirical_dimension_mismatch(channels):
    with pytest.raises(DimensionMismatchError):
        empirical_honesty_check(channels["lambda1"], channels["lambda2q"])


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(
    gamma=st.sampled_from([0.01, 0.05, 0.2]),
    scale=st.floats(min_value=0.3, max_value=1.0),
    weights=st.lists(st.floats(min_value=0.05, max_value=1.0), min_size=3, max_size=3),
)
def test_nonunital_certificate_is_sufficient(gamma, scale, weights):
    """Pauli mixtures certified against the non-unital bound pass the sampled check"""
    ch = make_amplitude_damping(gamma)
    w = np.array(weights) / np.sum(weights) * scale * 0.75
    probs = np.concatenate([[1 - w.sum()], w])
    approx = _pauli_mixture(probs)
    certificate = certify(bloch_map(approx).m, ch)
    assume(certificate.passed)
    assert certificate.mode is CertificateMode.NON_UNITAL
    report = empirical_honesty_check(approx, ch, n_samples=10_000, seed=1, threshold=1e-8)
    assert not report.violated


@settings(max_examples=50, deadline=None)
@given(
    first=st.lists(st.floats(min_value=-1, max_value=1), min_size=3, max_size=3),
    second=st.lists(st.floats(min_value=-1, max_value=1), min_size=3, max_size=3),
    weight=st.floats(min_value=0, max_value=1),
)
def test_io_distinguishability_is_convex_in_the_state(channels, first, second, weight):
    r1, r2 = np.array(first) / math.sqrt(3), np.array(second) / math.sqrt(3)
    mixed = weight * r1 + (1 - weight) * r2
    for ch in (channels["lambda1"], channels["lambda3_2"], make_amplitude_damping(0.2)):
        values = io_distinguishabilities(ch, density_from_bloch(np.stack([r1, r2, mixed])))
        assert values[2] <= weight * values[0] + (1 - weight) * values[1] + 1e-12
