import io
import math

import numpy as np
import pandas as pd
from pytest import approx, mark

from decohere.errors import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, NumericalError
from decohere.main import main
from decohere.models.scenario import build_scenario
from decohere.runners import scenarios, validation
from decohere.runners.scenarios import (
    ELEMENT_COLUMNS,
    EVOLVE_COLUMNS,
    SWEEP_COLUMNS,
    evolve_table,
    figure1_table,
    sweep_table,
    to_csv_text,
)
from decohere.services.decoherence import gamma_vac_partial


def _read(path):
    return pd.read_csv(path)


def test_evolve_minimal_schema(tmp_path):
    out = tmp_path / "evolve.csv"
    code = main(["evolve", "--out", str(out), "tau.points=3"])
    assert code == EXIT_OK
    frame = _read(out)
    assert list(frame.columns) == EVOLVE_COLUMNS
    assert len(frame) == 3
    assert frame["abs_rho_12"].iloc[0] == approx(0.5, rel=1e-5)


def test_evolve_is_byte_deterministic(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["evolve", "packet.n=6", "tau.points=5", "regime=uncorrelated"]
    assert main(args + ["--out", str(first)]) == EXIT_OK
    assert main(args + ["--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert b"\r" not in first.read_bytes()


def test_evolve_writes_to_stdout(capsys):
    assert main(["evolve", "tau.points=2"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(EVOLVE_COLUMNS)
    assert len(lines) == 3


def test_float_format_has_seventeen_digits():
    config = build_scenario({"tau.points": 2, "tau.max": 1.0})
    text = to_csv_text(evolve_table(config))
    value = text.splitlines()[2].split(",")[0]
    assert value == "1.0000000000000000e+00"


def test_elements_output():
    config = build_scenario({"packet.n": 3, "tau.points": 2, "outputs": "elements"})
    frame = evolve_table(config)
    assert list(frame.columns) == ELEMENT_COLUMNS
    assert len(frame) == 2 * 6
    diagonal = frame[frame["i"] == frame["j"]]
    assert np.all(diagonal["arg_rho"] == 0.0)


def test_figure1_columns_and_order(tmp_path):
    out = tmp_path / "figure1.csv"
    assert main(["figure1", "--out", str(out)]) == EXIT_OK
    frame = _read(out)
    assert list(frame.columns) == [
        "tau", "abs_gamma_vac_Q0.1", "abs_gamma_vac_Q0.5", "abs_gamma_vac_Q1", "abs_gamma_vac_Q5",
    ]
    curves = frame.iloc[:, 1:].to_numpy()
    assert np.all(np.diff(curves, axis=0) >= 0.0)
    assert np.all(np.diff(curves, axis=1) > 0.0)


def test_figure1_matches_scalar_exponent():
    config = build_scenario({"tau.min": 0.0, "tau.max": 50.0, "tau.points": 11})
    frame = figure1_table(config)
    assert frame["abs_gamma_vac_Q0.5"].iloc[0] == 0.0
    for tau, value in zip(frame["tau"].iloc[1:], frame["abs_gamma_vac_Q0.5"].iloc[1:]):
        assert value == approx(abs(gamma_vac_partial(0.5, tau)), rel=1e-15)


def test_figure1_rejects_q_values_sharing_a_column(capsys):
    assert main(["figure1", "figure1.q=[1.0, 1.0000001]"]) == EXIT_CONFIG
    assert "figure1.q" in capsys.readouterr().err


def test_figure1_crossover_near_unit_time():
    config = build_scenario({"tau.min": 1e-2, "tau.max": 1e3, "tau.points": 200, "tau.scale": "log"})
    frame = figure1_table(config)
    crossover = validation.figure1_crossover(frame, "abs_gamma_vac_Q1")
    assert 0.3 <= crossover <= 3.0
    assert crossover == approx(math.sqrt(2.0), rel=0.05)


def test_sweep_rows_are_ordered_for_any_worker_count():
    config = build_scenario({"sweep.q": [2.0, 0.1, 1.0], "tau.points": 4, "tau.min": 0.5})
    serial = sweep_table(config, jobs=1)
    threaded = sweep_table(config, jobs=3)
    assert list(serial.columns) == SWEEP_COLUMNS
    assert to_csv_text(serial) == to_csv_text(threaded)
    assert list(serial["Q"][::4]) == [2.0, 0.1, 1.0]
    row = serial.iloc[1]
    assert row["gamma_vac"] == approx(gamma_vac_partial(2.0, row["tau"]), rel=1e-15)


def test_config_error_exit_code(tmp_path, capsys):
    code = main(["evolve", "--out", str(tmp_path / "x.csv"), "tau.points=0"])
    assert code == EXIT_CONFIG
    assert "tau.points" in capsys.readouterr().err


def test_single_point_packet_is_a_config_error(capsys):
    code = main(["evolve", "packet.momenta=[0.0]", "packet.amplitudes=[1.0]"])
    assert code == EXIT_CONFIG
    assert "packet.momenta" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["sweep", "--config", str(tmp_path / "nope.yaml")]) == EXIT_CONFIG


def test_regime_mismatch_exit_code():
    assert main(["evolve", "omega_ir=1.0", "omega_uv=1.0"]) == EXIT_CONFIG


def test_numerical_failure_exit_code(monkeypatch, capsys):
    def fail(*args, **kwargs):
        raise NumericalError("quadrature did not converge", 1e-3)

    monkeypatch.setattr("decohere.main.run_scenario", fail)
    assert main(["evolve"]) == EXIT_NUMERICAL
    assert "achieved error" in capsys.readouterr().err


def test_validate_reports_failures(monkeypatch, tmp_path):
    monkeypatch.setattr(validation, "CHECKS", [
        ("passes", lambda: (0.0, 1.0)),
        ("fails", lambda: (2.0, 1.0)),
    ])
    out = tmp_path / "report.csv"
    assert main(["validate", "--out", str(out)]) == EXIT_NUMERICAL
    report = _read(out)
    assert list(report["check"]) == ["passes", "fails"]
    assert list(report["passed"]) == [1, 0]


def test_write_csv_to_stream():
    buffer = io.StringIO()
    scenarios.write_csv(pd.DataFrame({"a": [1.5]}), buffer)
    assert buffer.getvalue() == "a\n1.5000000000000000e+00\n"


@mark.parametrize("name", [name for name, _ in validation.CHECKS])
def test_validation_checks_pass(name):
    check = dict(validation.CHECKS)[name]
    worst, tolerance = check()
    assert worst <= tolerance
