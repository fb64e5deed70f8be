"""
units.py
--------

Conversion of SI scenario inputs into the dimensionless groups used by the
rest of the package.  Scenario files normally give ``omega_uv`` and
``omega_ir`` in units of Omega and ``chi`` directly; with ``units: si`` the
two frequencies are angular frequencies in rad/s and the particle is
described by its rest energy in eV.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from scipy import constants

from ..errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DimensionlessScales:
    omega_uv: float
    omega_ir: float
    chi: float
    uv_energy_ratio: float


def rest_energy_joules(rest_energy_ev: float) -> float:
    return rest_energy_ev * constants.e


def from_si(omega_uv: float, omega_ir: float, rest_energy_ev: float) -> DimensionlessScales:
    """Scale frequencies by Omega and derive chi and hbar Omega / m0 c^2."""
    if not rest_energy_ev > 0.0:
        raise ConfigError("must be > 0 when units are SI", field="rest_energy_ev")
    if not omega_uv > 0.0:
        raise ConfigError("must be > 0", field="omega_uv")
    if not 0.0 < omega_ir <= omega_uv:
        raise ConfigError("must lie in (0, omega_uv]", field="omega_ir")
    rest = rest_energy_joules(rest_energy_ev)
    scales = DimensionlessScales(
        omega_uv=1.0,
        omega_ir=omega_ir / omega_uv,
        chi=rest / (constants.hbar * omega_ir),
        uv_energy_ratio=constants.hbar * omega_uv / rest,
    )
    logger.info(
        "SI input converted: r=%.6g chi=%.6g hbar*Omega/m0c^2=%.6g",
        scales.omega_ir, scales.chi, scales.uv_energy_ratio,
    )
    return scales
