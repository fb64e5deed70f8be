import numpy as np
from numpy.testing import assert_allclose
from pytest import approx, mark, raises
from scipy import constants

from decohere.errors import ConfigError, RegimeMismatchError
from decohere.models.regime import Regime
from decohere.models.scenario import (
    GridScale,
    OutputKind,
    TauGrid,
    build_scenario,
    load_scenario,
    parse_override,
    unflatten,
)
from decohere.services.units import from_si


def test_defaults_validate():
    config = build_scenario({})
    assert config.regime is Regime.PARTIALLY_CORRELATED
    assert config.outputs is OutputKind.DIAGNOSTICS
    assert config.packet.build().size == 2
    assert config.figure1.q == [0.1, 0.5, 1.0, 5.0]


def test_dotted_keys_and_sections_merge():
    nested = unflatten({"packet.n": 4, "packet": {"width": 0.02}, "tau.points": 7})
    assert nested == {"packet": {"n": 4, "width": 0.02}, "tau": {"points": 7}}


def test_dotted_key_cannot_extend_a_value():
    with raises(ConfigError):
        unflatten({"tau": 3, "tau.points": 4})


@mark.parametrize("text expected".split(), (
    ("packet.n=16", ("packet.n", 16)),
    ("alpha=0.5", ("alpha", 0.5)),
    ("sweep.q=[0.1, 1]", ("sweep.q", [0.1, 1])),
    ("regime=uncorrelated", ("regime", "uncorrelated")),
))
def test_parse_override(text, expected):
    assert parse_override(text) == expected


def test_malformed_override():
    with raises(ConfigError):
        parse_override("packet.n")


def test_overrides_win_over_file_values():
    config = build_scenario({"packet.n": 4}, ["packet.n=8", "tau.scale=log", "tau.min=0.1"])
    assert config.packet.n == 8
    assert config.tau.scale is GridScale.LOG


@mark.parametrize("flat field".split(), (
    ({"tau.points": 0}, "tau.points"),
    ({"tau.min": -1.0}, "tau.min"),
    ({"packet.width": 0.0}, "packet.width"),
    ({"regime": "mixed"}, "regime"),
    ({"bogus": 1}, "bogus"),
    ({"alpha": 0.0}, "alpha"),
    ({"chi": -1.0}, "chi"),
    ({"mass_ratio": -2.0}, "mass_ratio"),
))
def test_errors_carry_the_field_path(flat, field):
    with raises(ConfigError) as excinfo:
        build_scenario(flat)
    assert excinfo.value.field == field
    assert str(excinfo.value).startswith(field)


def test_regime_mismatch_is_a_config_error():
    with raises(RegimeMismatchError):
        build_scenario({"omega_ir": 1.0, "omega_uv": 1.0})


def test_log_grid_needs_positive_start():
    with raises(ConfigError):
        build_scenario({"tau.scale": "log", "tau.min": 0.0})


def test_tau_grids():
    assert_allclose(TauGrid(min=0.0, max=10.0, points=3).values(), [0.0, 5.0, 10.0])
    assert_allclose(TauGrid(min=0.01, max=100.0, points=5, scale="log").values(),
                    [0.01, 0.1, 1.0, 10.0, 100.0], rtol=1e-14)
    assert_array = TauGrid(min=2.0, max=2.0, points=1).values()
    assert list(assert_array) == [2.0]


def test_explicit_packet_with_phases():
    config = build_scenario({
        "packet.momenta": [-0.01, 0.01],
        "packet.amplitudes": [1.0, 1.0],
        "packet.phases": [0.0, np.pi / 2],
    })
    packet = config.packet.build()
    assert_allclose(packet.amplitudes, [2 ** -0.5, 1j * 2 ** -0.5], atol=1e-16)


def test_explicit_packet_errors():
    with raises(ConfigError):
        build_scenario({"packet.momenta": [0.0, 0.1]})
    with raises(ConfigError) as excinfo:
        build_scenario({"packet.momenta": [0.1, 0.0], "packet.amplitudes": [1.0, 1.0]})
    assert excinfo.value.field == "packet"


def test_outputs_accepts_single_item_list():
    assert build_scenario({"outputs": ["elements"]}).outputs is OutputKind.ELEMENTS
    with raises(ConfigError):
        build_scenario({"outputs": ["elements", "diagnostics"]})


def test_r0_is_accepted():
    assert build_scenario({"r0": [0.0, 1.0, 2.0]}).r0 == [0.0, 1.0, 2.0]


def test_si_units_conversion():
    rest_ev = 510998.95
    config = build_scenario({
        "units": "si", "rest_energy_ev": rest_ev, "omega_uv": 1e20, "omega_ir": 1e15,
    })
    params = config.params()
    assert params.omega_uv == 1.0
    assert params.r == approx(1e-5)
    rest = rest_ev * constants.e
    assert params.kinetic_scale_chi == approx(rest / (constants.hbar * 1e15), rel=1e-12)
    assert params.uv_energy_ratio == approx(constants.hbar * 1e20 / rest, rel=1e-12)


def test_si_units_need_rest_energy():
    with raises(ConfigError) as excinfo:
        build_scenario({"units": "si", "omega_uv": 1e20, "omega_ir": 1e15})
    assert excinfo.value.field == "rest_energy_ev"
    with raises(ConfigError):
        from_si(1e20, 1e21, 1.0)


def test_load_scenario_file(tmp_path):
    path = tmp_path / "scenario.yaml"
    path.write_text("regime: uncorrelated\npacket.n: 3\ntau.points: 4\n")
    config = load_scenario(path, ["tau.max=2.0"])
    assert config.regime is Regime.UNCORRELATED
    assert config.tau.max == 2.0


@mark.parametrize("content", ("regime: [unclosed\n", "- just\n- a list\n"))
def test_unreadable_files(tmp_path, content):
    path = tmp_path / "bad.yaml"
    path.write_text(content)
    with raises(ConfigError):
        load_scenario(path)


def test_missing_file(tmp_path):
    with raises(ConfigError):
        load_scenario(tmp_path / "absent.yaml")
