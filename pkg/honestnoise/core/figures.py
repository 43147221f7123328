"""
Bloch-sphere deformation data for rotations and their approximations

For a rotation by theta = 2 asin(sqrt(0.1)) about an axis in the x-z plane,
three approximations are compared: the honest Pauli approximation (P), the
dephasing about the rotation axis that matches the rotation's input-output
distinguishability exactly (D), and the Pauli twirl (t).
"""
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np

from honestnoise.core.approximator import approximate_pauli, exact_dephasing_match
from honestnoise.core.channels import QuantumChannel, bloch_map, density_from_bloch
from honestnoise.core.honesty import io_distinguishabilities
from honestnoise.core.twirl import pauli_twirl
from honestnoise.core.zoo import FIG1_DEFAULTS, axis_from_angles, make_rotation
from honestnoise.models.schemas import OptimizerOptions

logger = logging.getLogger(__name__)

N_PLANE_POINTS = 360
N_ALPHA_POINTS = 181
PLANE_COLUMNS = ("phi", "x", "z", "P_x", "P_z", "D_x", "D_z", "t_x", "t_z")
CURVE_COLUMNS = ("alpha", "P", "D", "t", "lambda")


@dataclass(frozen=True, eq=False)
class FigureData:
    """Both data tables for one rotation axis"""

    j: int
    plane: np.ndarray
    curves: np.ndarray

    def column(self, name: str) -> np.ndarray:
        if name in CURVE_COLUMNS:
            return self.curves[:, CURVE_COLUMNS.index(name)]
        return self.plane[:, PLANE_COLUMNS.index(name)]


def fig1_channels(j: int, opts: Optional[OptimizerOptions] = None) -> Dict[str, QuantumChannel]:
    """
    Rotation number ``j`` and its three approximations

    Raises:
        ValueError: If j is not 0, 1 or 2
    """
    polars = FIG1_DEFAULTS["rotation_axis_polars"]
    if j not in range(len(polars)):
        raise ValueError(f"j must be one of 0..{len(polars) - 1}, got {j}")
    theta = FIG1_DEFAULTS["theta"]
    axis = axis_from_angles(polars[j])
    rotation = make_rotation(theta, axis)
    return {
        "lambda": rotation,
        "P": approximate_pauli(rotation, opts).mixture.to_channel(),
        "D": exact_dephasing_match(theta, axis).to_channel(),
        "t": pauli_twirl(rotation),
    }


def xz_circle(n_points: int) -> Tuple[np.ndarray, np.ndarray]:
    """Angles from +z towards +x and the corresponding unit Bloch vectors"""
    angles = np.linspace(0.0, 2 * math.pi, n_points, endpoint=False)
    vectors = np.stack([np.sin(angles), np.zeros_like(angles), np.cos(angles)], axis=1)
    return angles, vectors


def plane_table(channels: Dict[str, QuantumChannel], n_points: int = N_PLANE_POINTS) -> np.ndarray:
    """Unit vectors in the x-z plane and their images, projected on x-z"""
    phi, r = xz_circle(n_points)
    columns = [phi, r[:, 0], r[:, 2]]
    for name in ("P", "D", "t"):
        image = bloch_map(channels[name]).apply(r)
        columns += [image[:, 0], image[:, 2]]
    return np.column_stack(columns)


def curve_table(channels: Dict[str, QuantumChannel], n_points: int = N_ALPHA_POINTS) -> np.ndarray:
    """Input-output distinguishability of the pure states at angle alpha in [0, pi]"""
    alpha = np.linspace(0.0, math.pi, n_points)
    r = np.stack([np.sin(alpha), np.zeros_like(alpha), np.cos(alpha)], axis=1)
    states = density_from_bloch(r)
    columns = [alpha] + [io_distinguishabilities(channels[name], states) for name in ("P", "D", "t", "lambda")]
    return np.column_stack(columns)


def fig1_data(j: int, opts: Optional[OptimizerOptions] = None) -> FigureData:
    channels = fig1_channels(j, opts)
    data = FigureData(j=j, plane=plane_table(channels), curves=curve_table(channels))
    below = int(np.sum(data.column("t") > data.column("D") + 1e-9))
    logger.info("j=%d: twirl exceeds the exact match on %d of %d angles", j, below, N_ALPHA_POINTS)
    return data


def write_csv(path: Path, table: np.ndarray, columns: Tuple[str, ...]) -> None:
    """Comma-separated values, 17 significant digits, one '#' header line"""
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, table, fmt="%.17g", delimiter=",", header=",".join(columns), comments="# ")


def write_fig1_data(data: FigureData, out_dir: Path) -> Tuple[Path, Path]:
    """Write both tables for one axis; returns (plane file, curve file)"""
    plane_path = out_dir / f"fig1_j{data.j}_plane.csv"
    curve_path = out_dir / f"fig1_j{data.j}_distinguishability.csv"
    write_csv(plane_path, data.plane, PLANE_COLUMNS)
    write_csv(curve_path, data.curves, CURVE_COLUMNS)
    return plane_path, curve_path
