"""
End-to-end tests of the command-line entry point
"""
import json
import math

import pytest

import main
from honestnoise.commands.common import (
    EXIT_DISHONEST,
    EXIT_INFEASIBLE,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_SOLVER,
)
from honestnoise.core.errors import DimensionMismatchError, SolverFailureError
from honestnoise.core.twirl import pauli_twirl
from honestnoise.core.zoo import table_channels
from honestnoise.models.schemas import ChannelDocument, RunReport
from tests.conftest import DATA_CHANNELS

LAMBDA1 = f"{DATA_CHANNELS}/lambda1.json"
LAMBDA2 = f"{DATA_CHANNELS}/lambda2.json"
LAMBDA3_0 = f"{DATA_CHANNELS}/lambda3_0.json"
LAMBDA2Q = f"{DATA_CHANNELS}/lambda2q.json"
IDENTITY = f"{DATA_CHANNELS}/identity.json"


def _write(path, payload) -> str:
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload), encoding="utf-8")
    return str(path)


def test_diamond_of_channel_with_itself(capsys):
    assert main.main(["diamond", LAMBDA1, LAMBDA1]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == "0.000000"


def test_diamond_rotation_against_identity(capsys, tmp_path):
    rotation = _write(tmp_path / "rot.json", {"preset": "rotation-axis", "params": {"theta": 0.02, "axis_polar": 0}})
    out = tmp_path / "diamond.json"
    assert main.main(["diamond", rotation, IDENTITY, "--out", str(out)]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == "0.020000"
    report = json.loads(out.read_text())
    assert report["value"] == pytest.approx(2 * math.sin(0.01), abs=1e-6)
    assert report["lower_bound"] <= report["value"] + 1e-8


def test_malformed_json_reports_line(capsys, tmp_path):
    broken = _write(tmp_path / "broken.json", '{\n  "preset": "depolarizing",\n  "params": {"p": 0.01,}\n}')
    assert main.main(["diamond", broken, IDENTITY]) == EXIT_PARSE
    assert "line 3" in capsys.readouterr().err


def test_kraus_and_preset_together_is_rejected(tmp_path):
    both = _write(tmp_path / "both.json", {
        "preset": "depolarizing",
        "params": {"p": 0.01},
        "kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]],
    })
    assert main.main(["twirl", both]) == EXIT_PARSE


def test_preset_with_contradicting_qubit_count_is_rejected(capsys, tmp_path):
    wrong = _write(tmp_path / "wrong.json", {"preset": "depolarizing", "n_qubits": 2, "params": {"p": 0.01}})
    assert main.main(["diamond", wrong, IDENTITY]) == EXIT_PARSE
    assert "n_qubits=2" in capsys.readouterr().err

    with pytest.raises(DimensionMismatchError):
        ChannelDocument(preset="depolarizing", n_qubits=2, params={"p": 0.01}).to_channel()
    assert ChannelDocument(preset="depolarizing", n_qubits=1, params={"p": 0.01}).to_channel().n_qubits == 1


def test_usage_error_exits_with_parse_code():
    with pytest.raises(SystemExit) as excinfo:
        main.main(["approximate"])
    assert excinfo.value.code == EXIT_PARSE


def test_honesty_check_outcomes(capsys, tmp_path):
    ch = table_channels()["lambda3_0"]
    twirled = _write(tmp_path / "twirl.json", ChannelDocument.from_channel(pauli_twirl(ch)).model_dump_json())
    dephasing = _write(tmp_path / "dephasing.json", {"preset": "dephasing-z", "params": {"p": math.sin(0.01)}})

    assert main.main(["honesty-check", LAMBDA1, LAMBDA1, "--samples", "500"]) == EXIT_OK
    assert main.main(["honesty-check", twirled, LAMBDA3_0, "--samples", "2000"]) == EXIT_DISHONEST
    assert "witness Bloch vector" in capsys.readouterr().out
    out = tmp_path / "honesty.json"
    assert main.main(["honesty-check", dephasing, LAMBDA3_0, "--samples", "2000", "--out", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["honest"] is True


def test_approximate_identity(capsys):
    assert main.main(["approximate", IDENTITY, "--restarts", "2", "--samples", "0"]) == EXIT_OK
    report = RunReport.model_validate_json(capsys.readouterr().out)
    assert report.diamond_dist == 0.0
    assert report.probs == [1.0, 0.0, 0.0, 0.0]
    assert report.mixture.to_channel().n_qubits == 1
    assert report.certificate.verdict == "pass"


def test_approximate_infeasible_custom_set(tmp_path):
    code = main.main([
        "approximate", LAMBDA2,
        "--set", "data/mixing_sets/pauli_z_phase.json",
        "--restarts", "2", "--max-iter", "30", "--samples", "0",
        "--out", str(tmp_path / "report.json"),
    ])
    assert code == EXIT_INFEASIBLE


def test_augmented_set_on_two_qubits_is_rejected():
    assert main.main(["approximate", LAMBDA2Q, "--set", "pauli+H"]) == EXIT_PARSE


def test_solver_failure_exit_code(monkeypatch):
    def fail(*args, **kwargs):
        raise SolverFailureError("duality gap 1e-3")

    monkeypatch.setattr("honestnoise.commands.diamond.diamond_distance", fail)
    assert main.main(["diamond", LAMBDA1, LAMBDA2]) == EXIT_SOLVER


def test_reproduce_table_two(capsys):
    assert main.main(["reproduce-tables", "--table", "2", "--restarts", "1"]) == EXIT_OK
    assert "0.9999" in capsys.readouterr().out


def test_unknown_table_number():
    with pytest.raises(SystemExit) as excinfo:
        main.main(["reproduce-tables", "--table", "7"])
    assert excinfo.value.code == EXIT_PARSE


def test_twirl_command(capsys, tmp_path):
    out = tmp_path / "twirl.json"
    assert main.main(["twirl", LAMBDA3_0, "--out", str(out)]) == EXIT_OK
    assert "||L - L_t|| = 0.0200" in capsys.readouterr().out
    report = json.loads(out.read_text())
    assert report["chi_diag"][3] == pytest.approx(math.sin(0.01) ** 2)
    assert report["equivalence_deviation"] <= 1e-10
    assert report["pauli_to_identity"] is None


@pytest.mark.slow
def test_twirl_command_compares_with_pauli_approximation(capsys, tmp_path):
    out = tmp_path / "twirl.json"
    assert main.main(["twirl", LAMBDA3_0, "--pauli", "--restarts", "2", "--out", str(out)]) == EXIT_OK
    assert "honest Pauli: ||L - L_P||" in capsys.readouterr().out
    report = json.loads(out.read_text())
    assert report["pauli_distance"] == pytest.approx(0.0281, abs=2e-3)
    assert report["pauli_to_identity"] == pytest.approx(0.02, abs=1e-3)
    assert report["pauli_to_identity"] >= report["twirl_to_identity"]


@pytest.mark.slow
def test_fig1_data_writes_both_files(tmp_path):
    code = main.main(["fig1-data", "--j", "0", "--out", str(tmp_path), "--restarts", "2", "--samples", "0"])
    assert code == EXIT_OK
    assert (tmp_path / "fig1_j0_plane.csv").read_text().startswith("# phi,x,z,P_x,P_z,D_x,D_z,t_x,t_z")
    assert len((tmp_path / "fig1_j0_distinguishability.csv").read_text().splitlines()) == 182
