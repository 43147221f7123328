"""
Constructors for the noise channels studied in the approximation tables,
plus amplitude damping as a non-unital test channel.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from honestnoise.core.channels import SINGLE_QUBIT_PAULIS, QuantumChannel, pauli_matrix
from honestnoise.core.errors import BadAxisError, BadProbabilityError, UnknownPresetError

AXIS_TOL = 1e-12

# Parameter bundle used for Tables I-V
TABLE_DEFAULTS: Dict[str, object] = {
    "p": 0.01,
    "theta": 0.02,
    "dephase_axis_polar": math.pi / 8,
    "rotation_axis_polars": tuple(k * math.pi / 8 for k in range(5)),
}

# Larger rotation angle used for the Bloch-sphere deformation data
FIG1_DEFAULTS: Dict[str, object] = {
    "theta": 2 * math.asin(math.sqrt(0.1)),
    "rotation_axis_polars": tuple(k * math.pi / 8 for k in range(3)),
}

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def _check_probability(name: str, p: float, upper: float = 1.0) -> float:
    p = float(p)
    if not 0.0 <= p <= upper:
        raise BadProbabilityError(f"{name} must lie in [0, {upper:g}], got {p}")
    return p


def _check_axis(axis: Sequence[float]) -> np.ndarray:
    axis = np.asarray(axis, dtype=float).reshape(-1)
    if axis.shape != (3,):
        raise BadAxisError(f"axis must be a 3-vector, got shape {axis.shape}")
    norm = float(np.linalg.norm(axis))
    if abs(norm - 1.0) > AXIS_TOL:
        raise BadAxisError(f"axis must be unit norm, got norm {norm:.15f}")
    return axis


def axis_from_angles(polar: float, azimuth: float = 0.0) -> np.ndarray:
    """Unit vector at ``polar`` from +z and ``azimuth`` from +x"""
    return np.array([
        math.sin(polar) * math.cos(azimuth),
        math.sin(polar) * math.sin(azimuth),
        math.cos(polar),
    ])


def axis_operator(axis: Sequence[float]) -> np.ndarray:
    """n.sigma for a unit axis n"""
    n = _check_axis(axis)
    return sum(c * SINGLE_QUBIT_PAULIS[k] for c, k in zip(n, "XYZ"))


def make_dephase_axis(p: float, axis: Sequence[float]) -> QuantumChannel:
    """
    Dephasing about an arbitrary axis: rho -> (1-p) rho + p (n.s) rho (n.s)

    Raises:
        BadProbabilityError: If p is outside [0, 1]
        BadAxisError: If axis is not a unit 3-vector
    """
    p = _check_probability("p", p)
    n_sigma = axis_operator(axis)
    return QuantumChannel((math.sqrt(1 - p) * np.eye(2, dtype=complex), math.sqrt(p) * n_sigma))


def make_depolarizing(p: float) -> QuantumChannel:
    """
    Depolarizing channel rho -> (1-3p) rho + p sum_i s_i rho s_i

    Raises:
        BadProbabilityError: If 3p is outside [0, 1]
    """
    p = _check_probability("p", p, upper=1.0 / 3.0)
    weights = (1 - 3 * p, p, p, p)
    return QuantumChannel(tuple(
        math.sqrt(w) * SINGLE_QUBIT_PAULIS[k] for w, k in zip(weights, "IXYZ")
    ))


def make_rotation(theta: float, axis: Sequence[float]) -> QuantumChannel:
    """
    Unitary rotation exp(-i theta/2 n.s)

    Raises:
        BadAxisError: If axis is not a unit 3-vector
    """
    n_sigma = axis_operator(axis)
    u = math.cos(theta / 2) * np.eye(2, dtype=complex) - 1j * math.sin(theta / 2) * n_sigma
    return QuantumChannel((u,))


def make_dephasing_z(p: float) -> QuantumChannel:
    """Pauli channel rho -> (1-p) rho + p Z rho Z"""
    p = _check_probability("p", p)
    return QuantumChannel((math.sqrt(1 - p) * SINGLE_QUBIT_PAULIS["I"], math.sqrt(p) * SINGLE_QUBIT_PAULIS["Z"]))


def make_hadamard_mixture(p: float) -> QuantumChannel:
    """Mixed-Clifford channel rho -> (1-p) rho + p H rho H"""
    p = _check_probability("p", p)
    return QuantumChannel((math.sqrt(1 - p) * SINGLE_QUBIT_PAULIS["I"], math.sqrt(p) * HADAMARD))


def make_collective_xx(theta: float) -> QuantumChannel:
    """Two-qubit collective rotation with Kraus operator exp(-i theta/2 X(x)X)"""
    return QuantumChannel((expm(-0.5j * theta * pauli_matrix("XX")),))


def make_amplitude_damping(gamma: float) -> QuantumChannel:
    """
    Amplitude damping towards |0>; Bloch translation t = (0, 0, gamma)

    Raises:
        BadProbabilityError: If gamma is outside [0, 1]
    """
    gamma = _check_probability("gamma", gamma)
    k0 = np.array([[1, 0], [0, math.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, math.sqrt(gamma)], [0, 0]], dtype=complex)
    return QuantumChannel((k0, k1))


@dataclass(frozen=True)
class PresetSpec:
    """A named preset with its parameters"""

    name: str
    params: Mapping[str, float] = field(default_factory=dict)

    def build(self) -> QuantumChannel:
        return build_preset(self.name, self.params)


def _axis(params: Mapping[str, float]) -> np.ndarray:
    return axis_from_angles(params.get("axis_polar", 0.0), params.get("axis_azimuth", 0.0))


_BUILDERS: Dict[str, Tuple[Tuple[str, ...], Callable[[Mapping[str, float]], QuantumChannel]]] = {
    "dephase-axis": (("p", "axis_polar", "axis_azimuth"), lambda q: make_dephase_axis(q["p"], _axis(q))),
    "depolarizing": (("p",), lambda q: make_depolarizing(q["p"])),
    "rotation-axis": (("theta", "axis_polar", "axis_azimuth"), lambda q: make_rotation(q["theta"], _axis(q))),
    "dephasing-z": (("p",), lambda q: make_dephasing_z(q["p"])),
    "hadamard-mixture": (("p",), lambda q: make_hadamard_mixture(q["p"])),
    "collective-xx": (("theta",), lambda q: make_collective_xx(q["theta"])),
    "amplitude-damping": (("gamma",), lambda q: make_amplitude_damping(q["gamma"])),
}

PRESET_NAMES = tuple(_BUILDERS)

_REQUIRED = {"p", "theta", "gamma"}


def build_preset(name: str, params: Mapping[str, float]) -> QuantumChannel:
    """
    Build a preset channel from its name and named parameters

    Raises:
        UnknownPresetError: If the name is not registered
        ValueError: If a parameter is missing or unknown
    """
    try:
        keys, builder = _BUILDERS[name]
    except KeyError:
        raise UnknownPresetError(f"unknown preset {name!r}; expected one of {', '.join(PRESET_NAMES)}")
    unknown = set(params) - set(keys)
    if unknown:
        raise ValueError(f"preset {name!r} does not take parameter(s) {sorted(unknown)}")
    missing = [k for k in keys if k in _REQUIRED and k not in params]
    if missing:
        raise ValueError(f"preset {name!r} requires parameter(s) {missing}")
    return builder({k: float(v) for k, v in params.items()})


def table_presets(theta: float = TABLE_DEFAULTS["theta"]) -> Dict[str, PresetSpec]:
    """Presets for every channel in the approximation tables, keyed by label"""
    p = TABLE_DEFAULTS["p"]
    specs = {
        "lambda1": PresetSpec("dephase-axis", {"p": p, "axis_polar": TABLE_DEFAULTS["dephase_axis_polar"]}),
        "lambda2": PresetSpec("depolarizing", {"p": p}),
    }
    for k, polar in enumerate(TABLE_DEFAULTS["rotation_axis_polars"]):
        specs[f"lambda3_{k}"] = PresetSpec("rotation-axis", {"theta": theta, "axis_polar": polar})
    specs["lambda2q"] = PresetSpec("collective-xx", {"theta": theta})
    return specs


def table_channels(theta: float = TABLE_DEFAULTS["theta"]) -> Dict[str, QuantumChannel]:
    return {label: spec.build() for label, spec in table_presets(theta).items()}
