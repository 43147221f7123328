"""
Tests for the diamond-norm program and its sampled lower bound
"""
import math

import numpy as np
import pytest
from scipy.stats import unitary_group

from honestnoise.core import diamond
from honestnoise.core.approximator import mixing_set
from honestnoise.core.channels import compose, identity_channel, kraus_to_choi, unitary_channel
from honestnoise.core.diamond import (
    SdpProblem,
    SdpStatus,
    diamond_distance,
    diamond_lower_bound,
    maximally_entangled_distance,
    solve_diamond,
)
from honestnoise.core.errors import DimensionMismatchError, NotHermitianError, SolverFailureError
from honestnoise.core.twirl import pauli_twirl
from honestnoise.core.zoo import make_amplitude_damping, make_dephasing_z, make_depolarizing, make_rotation
from tests.conftest import random_unit_vector


def test_identical_channels_are_at_distance_zero(channels):
    result = diamond_distance(channels["lambda1"], channels["lambda1"])
    assert result.value == 0.0
    assert result.solution.status is SdpStatus.OPTIMAL


def test_rotation_against_identity(rng):
    """||U - I||_dia = 2|sin(theta/2)| with a closed duality gap"""
    for _ in range(20):
        theta = rng.uniform(0.01, math.pi - 0.01)
        result = diamond_distance(make_rotation(theta, random_unit_vector(rng)), identity_channel())
        assert result.value == pytest.approx(2 * abs(math.sin(theta / 2)), abs=1e-6)
        assert abs(result.solution.gap) <= 1e-8


def test_pauli_channels_distance_is_l1_of_probabilities():
    """Two Pauli channels differ by the l1 distance of their probability vectors"""
    result = diamond_distance(make_dephasing_z(0.1), make_depolarizing(0.02))
    expected = abs(0.9 - 0.94) + 0.02 + 0.02 + abs(0.1 - 0.02)
    assert result.value == pytest.approx(expected, abs=1e-6)


def test_twirl_distance_for_z_rotation(channels):
    """The twirl drops the I-Z coherence 2 cos(theta/2) sin(theta/2) = sin(theta)"""
    ch = channels["lambda3_0"]
    assert diamond_distance(ch, pauli_twirl(ch)).value == pytest.approx(math.sin(0.02), abs=1e-6)
    assert diamond_distance(channels["lambda1"], pauli_twirl(channels["lambda1"])).value == \
        pytest.approx(0.0071, abs=5e-4)


@pytest.mark.parametrize("label", ["lambda1", "lambda3_0", "lambda3_2"])
def test_lower_bound_matches_program(channels, label):
    ch = channels[label]
    twirled = pauli_twirl(ch)
    value = diamond_distance(ch, twirled).value
    lower = diamond_lower_bound(ch, twirled, n_restarts=8, seed=0)
    assert lower <= value + 1e-8
    assert lower == pytest.approx(value, abs=1e-4)
    assert maximally_entangled_distance(ch, twirled) <= value + 1e-8


def test_two_qubit_rotation_against_identity(channels):
    result = diamond_distance(channels["lambda2q"], identity_channel(2))
    assert result.value == pytest.approx(2 * math.sin(0.01), abs=1e-6)


def test_dimension_errors(channels):
    with pytest.raises(DimensionMismatchError):
        diamond_distance(channels["lambda1"], channels["lambda2q"])
    with pytest.raises(DimensionMismatchError):
        diamond_lower_bound(channels["lambda1"], channels["lambda2q"])
    with pytest.raises(DimensionMismatchError):
        SdpProblem(np.zeros((4, 4)), 2, 4)


def test_problem_requires_hermitian_choi():
    choi = np.zeros((4, 4), dtype=complex)
    choi[0, 1] = 1.0
    with pytest.raises(NotHermitianError):
        SdpProblem(choi, 2, 2)


def test_solution_reports_primal_and_dual():
    choi = kraus_to_choi(make_rotation(0.5, [1, 0, 0])) - kraus_to_choi(identity_channel())
    solution = solve_diamond(SdpProblem(choi, 2, 2))
    assert solution.dual >= solution.primal - 1e-8
    assert solution.primal == pytest.approx(2 * math.sin(0.25), abs=1e-6)
    assert solution.iterations > 0
    assert abs(solution.gap) <= 1e-8


def test_gap_closes_across_random_rotations(rng):
    """Every rotation-versus-identity solve certifies within the default tolerance"""
    for _ in range(40):
        theta = rng.uniform(0.001, math.pi)
        result = diamond_distance(make_rotation(theta, random_unit_vector(rng)), identity_channel())
        assert result.solution.status is SdpStatus.OPTIMAL
        assert abs(result.solution.gap) <= 1e-8
        assert result.solution.dual >= result.value - 1e-12


def test_gap_closes_on_table_pairs(channels):
    exact = mixing_set("pauli").mixture([0.99, 0.0, 0.0, 0.01]).to_channel()
    result = diamond_distance(channels["lambda3_0"], exact)
    assert result.value == pytest.approx(0.0281, abs=2e-3)
    assert abs(result.solution.gap) <= 1e-8

    ch = channels["lambda3_1"]
    result = diamond_distance(ch, pauli_twirl(ch))
    assert result.value == pytest.approx(math.sin(0.02), abs=1e-6)
    assert abs(result.solution.gap) <= 1e-8


def test_value_is_reported_unclamped(channels):
    result = diamond_distance(channels["lambda1"], make_amplitude_damping(0.05))
    assert result.value == result.solution.primal
    assert 0.0 <= result.value <= 2.0


def test_value_outside_unit_range_fails_loudly(monkeypatch):
    monkeypatch.setattr(diamond, "_primal_value", lambda j, rho, d: 2.5)
    with pytest.raises(SolverFailureError, match=r"outside \[0, 2\]"):
        diamond_distance(make_rotation(0.5, [1, 0, 0]), identity_channel())


def test_unitary_invariance(channels, rng):
    u = unitary_channel(unitary_group.rvs(2, random_state=rng))
    a, b = channels["lambda1"], channels["lambda3_2"]
    base = diamond_distance(a, b).value
    assert diamond_distance(compose(a, u), compose(b, u)).value == pytest.approx(base, abs=1e-6)
    assert diamond_distance(compose(u, a), compose(u, b)).value == pytest.approx(base, abs=1e-6)


def test_triangle_inequality(channels):
    a, b, c = channels["lambda1"], channels["lambda3_2"], make_amplitude_damping(0.05)
    assert diamond_distance(a, b).value <= diamond_distance(a, c).value + diamond_distance(c, b).value + 1e-8


@pytest.mark.parametrize("label, probs", [
    ("lambda1", [0.986, 0.002, 0.004, 0.008]),
    ("lambda3_0", [0.99, 0.0, 0.0, 0.01]),
    ("lambda3_2", [0.985, 0.005, 0.005, 0.005]),
])
def test_lower_bound_matches_program_on_approximations(channels, label, probs):
    ch = channels[label]
    approx = mixing_set("pauli").mixture(probs).to_channel()
    value = diamond_distance(ch, approx).value
    lower = diamond_lower_bound(ch, approx, n_restarts=8, seed=0)
    assert lower <= value + 1e-8
    assert lower == pytest.approx(value, abs=1e-4)
