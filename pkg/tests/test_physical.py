import logging
import math

import numpy as np
from hypothesis import given
from hypothesis.strategies import floats
from numpy.testing import assert_allclose
from pydantic import ValidationError
from pytest import approx, mark, raises

from decohere.errors import DomainError
from decohere.models.physical import (
    MomentumPair,
    PhysicalParams,
    delta_m_above,
    delta_m_below,
    delta_m_over_m0,
    m_varpi_over_m,
    mass_ratio_for_regime,
    phase_prefactor,
    q_factor,
)
from decohere.models.regime import CutoffShape, Regime

ALPHA = 1 / 137.036


def test_coupling_and_ratio():
    params = PhysicalParams(alpha=ALPHA, omega_uv=2.0, omega_ir=0.5)
    assert params.coupling == approx(2 * ALPHA / (3 * math.pi), rel=1e-15)
    assert params.r == 0.25


def test_q_factor_vanishes_for_equal_momenta():
    assert q_factor(MomentumPair(u=0.03, u_prime=0.03), PhysicalParams()) == 0.0


def test_q_factor_unit_separation():
    q = q_factor(MomentumPair(u=0.5, u_prime=-0.5), PhysicalParams(alpha=ALPHA))
    assert q == approx(2 / (3 * math.pi * 137.036), rel=1e-14)
    # the printed reference value is rounded
    assert q == approx(1.5489e-3, rel=1e-3)


@given(floats(-0.05, 0.05), floats(-0.05, 0.05))
def test_q_factor_is_quadratic_in_separation(u, v):
    params = PhysicalParams()
    single = q_factor(MomentumPair(u=u, u_prime=v), params)
    double = q_factor(MomentumPair(u=2 * u, u_prime=2 * v), params)
    assert double == approx(4 * single, rel=1e-12, abs=1e-300)


@given(floats(-0.1, 0.1), floats(-0.1, 0.1))
def test_qp_factor_is_antisymmetric(u, v):
    params = PhysicalParams()
    assert MomentumPair(u=u, u_prime=v).qp_factor(params) == \
        -MomentumPair(u=v, u_prime=u).qp_factor(params)


@mark.parametrize("kwargs", (
    {"alpha": 0.0},
    {"alpha": -1.0},
    {"omega_uv": 1.0, "omega_ir": 2.0},
    {"kinetic_scale_chi": -1.0},
    {"mass_ratio_m_over_m0": 0.0},
    {"unknown": 1.0},
))
def test_invalid_params_are_rejected(kwargs):
    with raises(ValidationError):
        PhysicalParams(**kwargs)


def test_params_are_frozen():
    params = PhysicalParams()
    with raises(ValidationError):
        params.alpha = 0.5


def test_non_relativistic_guard_warns(caplog):
    with caplog.at_level(logging.WARNING, logger="decohere.models.physical"):
        MomentumPair(u=0.2, u_prime=0.0)
    assert "non-relativistic" in caplog.text


def test_non_finite_momenta_are_rejected():
    with raises(ValidationError):
        MomentumPair(u=math.inf, u_prime=0.0)


def test_from_vectors_reduces_collinear_input():
    pair = MomentumPair.from_vectors([0.0, 0.0, 0.03], [0.0, 0.0, -0.01])
    assert pair.u == approx(0.03)
    assert pair.u_prime == approx(-0.01)
    assert pair.separation_squared == approx(0.04 ** 2)


def test_from_vectors_rejects_non_collinear_input():
    with raises(DomainError):
        MomentumPair.from_vectors([0.01, 0.0, 0.0], [0.0, 0.01, 0.0])


def test_phase_prefactor_examples():
    pair = MomentumPair(u=0.03, u_prime=0.01)
    assert phase_prefactor(MomentumPair(u=0.02, u_prime=0.02), PhysicalParams(kinetic_scale_chi=2)) == 0.0
    assert phase_prefactor(pair, PhysicalParams(kinetic_scale_chi=0.0)) == 0.0
    # u^2 - u'^2 = 1, chi = 2 and no low-frequency mass shift gives exactly 1
    unit = MomentumPair.model_construct(u=1.0, u_prime=0.0)
    params = PhysicalParams(kinetic_scale_chi=2.0, uv_energy_ratio=0.0)
    assert phase_prefactor(unit, params) == 1.0


def test_mass_shift_reference_value():
    params = PhysicalParams(alpha=ALPHA, uv_energy_ratio=1.0)
    assert delta_m_over_m0(params) == approx(4 / (3 * math.pi) / 137.036, rel=1e-12)
    # the printed reference value is rounded
    assert delta_m_over_m0(params) == approx(3.0978e-3, rel=1e-3)


def test_mass_shift_vanishes_when_decoupled():
    params = PhysicalParams.model_construct(
        alpha=0.0, omega_uv=1.0, omega_ir=0.01, mass_ratio_m_over_m0=1.0,
        kinetic_scale_chi=0.0, uv_energy_ratio=1e-3, mass_cutoff=CutoffShape.EXPONENTIAL,
    )
    assert delta_m_over_m0(params) == 0.0


def test_mass_shift_is_linear_in_uv_cutoff():
    base = PhysicalParams(uv_energy_ratio=1e-3)
    doubled = PhysicalParams(uv_energy_ratio=2e-3)
    assert delta_m_over_m0(doubled) == approx(2 * delta_m_over_m0(base), rel=1e-15)


@mark.parametrize("shape", list(CutoffShape))
def test_mass_split_adds_up(shape):
    params = PhysicalParams(omega_ir=0.3, mass_cutoff=shape)
    assert delta_m_above(params) + delta_m_below(params) == approx(delta_m_over_m0(params))
    assert delta_m_below(params) >= 0.0


def test_exponential_split_at_equal_cutoffs():
    params = PhysicalParams(omega_uv=1.0, omega_ir=1.0)
    assert delta_m_above(params) == approx(math.exp(-1) * delta_m_over_m0(params), rel=1e-15)


def test_step_split_fraction():
    params = PhysicalParams(omega_ir=0.25, mass_cutoff=CutoffShape.STEP)
    assert delta_m_above(params) == approx(0.75 * delta_m_over_m0(params), rel=1e-15)


def test_small_infrared_cutoff_leaves_all_dressing_high():
    params = PhysicalParams(omega_ir=1e-12)
    assert_allclose(delta_m_above(params), delta_m_over_m0(params), rtol=1e-11)
    assert m_varpi_over_m(params) == approx(1.0, abs=1e-14)


def test_m_varpi_plug_in():
    # delta m_<varpi / m = 0.01 with m = m0: r chosen so that the step split gives 0.01
    params = PhysicalParams(alpha=1.0, uv_energy_ratio=1.0, omega_ir=0.01 * 3 * math.pi / 4,
                            mass_cutoff=CutoffShape.STEP)
    assert delta_m_below(params) == approx(0.01, rel=1e-12)
    assert m_varpi_over_m(params) == approx(1 / 1.01, rel=1e-12)


def test_mass_ratio_per_regime():
    params = PhysicalParams(mass_ratio_m_over_m0=1.02, omega_ir=0.2)
    assert mass_ratio_for_regime(params, Regime.UNCORRELATED) == 1.0
    assert mass_ratio_for_regime(params, Regime.FULLY_CORRELATED) == approx(1 / 1.02)
    partial = mass_ratio_for_regime(params, Regime.PARTIALLY_CORRELATED)
    assert partial == approx(1 / (1.02 * m_varpi_over_m(params)))
    assert partial > mass_ratio_for_regime(params, Regime.FULLY_CORRELATED)


@mark.parametrize("shape", list(CutoffShape))
def test_mass_chain_is_nonincreasing_in_infrared_cutoff(shape):
    above, ratio = [], []
    for omega_ir in np.linspace(1e-4, 1.0, 200):
        params = PhysicalParams(omega_ir=float(omega_ir), uv_energy_ratio=0.1, mass_cutoff=shape)
        above.append(delta_m_above(params))
        ratio.append(m_varpi_over_m(params))
    assert np.all(np.diff(above) <= 0.0)
    assert np.all(np.diff(ratio) <= 0.0)


@given(floats(-0.05, 0.05), floats(-0.05, 0.05), floats(-0.05, 0.05))
def test_q_factor_depends_only_on_the_separation(u, v, shift):
    params = PhysicalParams()
    moved = q_factor(MomentumPair(u=u + shift, u_prime=v + shift), params)
    expected = params.coupling * ((u + shift) - (v + shift)) ** 2
    assert moved == approx(expected, rel=1e-12, abs=1e-300)
    assert moved == approx(q_factor(MomentumPair(u=u, u_prime=v), params), rel=1e-9, abs=1e-18)
