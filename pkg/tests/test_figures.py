"""
Tests for the Bloch-sphere deformation data
"""
import math

import numpy as np
import pytest

from honestnoise.core.approximator import exact_dephasing_match
from honestnoise.core.figures import (
    CURVE_COLUMNS,
    N_ALPHA_POINTS,
    PLANE_COLUMNS,
    FigureData,
    curve_table,
    fig1_channels,
    fig1_data,
    plane_table,
    write_csv,
    write_fig1_data,
    xz_circle,
)
from honestnoise.core.twirl import pauli_twirl
from honestnoise.core.zoo import FIG1_DEFAULTS, axis_from_angles, make_rotation


def _channels(j: int):
    """Rotation j with its exact dephasing match standing in for the optimizer result"""
    theta = FIG1_DEFAULTS["theta"]
    axis = axis_from_angles(FIG1_DEFAULTS["rotation_axis_polars"][j])
    rotation = make_rotation(theta, axis)
    dephasing = exact_dephasing_match(theta, axis).to_channel()
    return {"lambda": rotation, "P": dephasing, "D": dephasing, "t": pauli_twirl(rotation)}


def test_xz_circle():
    phi, r = xz_circle(4)
    assert np.allclose(phi, [0, math.pi / 2, math.pi, 3 * math.pi / 2])
    assert np.allclose(r, [[0, 0, 1], [1, 0, 0], [0, 0, -1], [-1, 0, 0]], atol=1e-15)


def test_exact_match_curve():
    curves = curve_table(_channels(0))
    d = curves[:, CURVE_COLUMNS.index("D")]
    assert curves.shape == (N_ALPHA_POINTS, len(CURVE_COLUMNS))
    assert np.allclose(d, curves[:, CURVE_COLUMNS.index("lambda")], atol=1e-12)
    # z axis: the poles are fixed, the equator moves by 2 sqrt(0.1)
    assert d[0] == pytest.approx(0.0, abs=1e-12)
    assert d[N_ALPHA_POINTS // 2] == pytest.approx(2 * math.sqrt(0.1), abs=1e-9)
    assert d[N_ALPHA_POINTS // 2] == pytest.approx(0.63246, abs=1e-5)


def test_plane_table_keeps_pauli_images_in_plane():
    plane = plane_table(_channels(2), n_points=12)
    assert plane.shape == (12, len(PLANE_COLUMNS))
    assert np.all(np.hypot(plane[:, 3], plane[:, 4]) <= 1 + 1e-12)


def test_fig1_channels_rejects_unknown_axis():
    with pytest.raises(ValueError):
        fig1_channels(3)


def test_write_csv(tmp_path):
    curves = curve_table(_channels(1))
    path = tmp_path / "nested" / "curve.csv"
    write_csv(path, curves, CURVE_COLUMNS)
    lines = path.read_text().splitlines()
    assert lines[0] == "# alpha,P,D,t,lambda"
    loaded = np.loadtxt(path, delimiter=",")
    assert loaded.shape == (N_ALPHA_POINTS, 5)
    assert np.array_equal(loaded, curves)


def test_write_fig1_data_file_names(tmp_path):
    channels = _channels(1)
    data = FigureData(j=1, plane=plane_table(channels), curves=curve_table(channels))
    plane_path, curve_path = write_fig1_data(data, tmp_path)
    assert plane_path.name == "fig1_j1_plane.csv"
    assert curve_path.name == "fig1_j1_distinguishability.csv"
    assert np.allclose(data.column("alpha"), np.linspace(0, math.pi, N_ALPHA_POINTS))


@pytest.mark.slow
@pytest.mark.parametrize("j", [0, 1, 2])
def test_curves_are_ordered(fast_opts, j):
    """
    P >= D everywhere; D >= t wherever the state is at least asin(s) away from
    the rotation axis, s = sin(theta/2)

    The twirl moves the state by 2 s^2 sqrt(n_z^4 sin^2 a + n_x^4 cos^2 a) <= 2 s^2,
    the exact match by 2 s |sin(a - phi)|.
    """
    data = fig1_data(j, fast_opts)
    assert np.all(data.column("P") >= data.column("D") - 1e-9)
    assert np.allclose(data.column("D"), data.column("lambda"), atol=1e-10)
    s = math.sin(FIG1_DEFAULTS["theta"] / 2)
    away = np.abs(np.sin(data.column("alpha") - FIG1_DEFAULTS["rotation_axis_polars"][j])) >= s
    assert np.all(data.column("D")[away] >= data.column("t")[away] - 1e-9)
    if j == 0:
        assert np.all(data.column("D") >= data.column("t") - 1e-9)
    else:
        # near the tilted axis the twirl is the more distinguishable one
        assert np.any(data.column("t") > data.column("D") + 1e-9)
