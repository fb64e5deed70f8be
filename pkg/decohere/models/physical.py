"""
Physical parameters and the mass-renormalisation chain
------------------------------------------------------

Every closed form in the package depends on a handful of dimensionless
groups:

* ``alpha``            fine-structure constant e^2/(hbar c)
* ``u = p/(m0 c)``     momenta in units of the bare rest momentum
* ``r = varpi/Omega``  ratio of preparation cutoff to UV cutoff
* ``chi = m0 c^2/(hbar varpi)``  scale of the free kinetic phase
* ``uv_energy_ratio = hbar Omega/(m0 c^2)``  scale of the mass shift

``PhysicalParams`` is the single place these are stored.  The functions
below compute the decoherence strength ``Q`` and the chain
delta m -> delta m_{>varpi} -> delta m_{<varpi} -> m_varpi.

The wave-packet position r0 enters the mode amplitudes only as a common
phase exp(-i k.r0) shared by both coherent states of every overlap, so it
cancels; it is accepted by the configuration layer and not stored here.
"""

from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np
from pydantic import Field, model_validator

from ..errors import DomainError
from .base import FrozenModel
from .regime import CutoffShape, Regime

logger = logging.getLogger(__name__)

FINE_STRUCTURE = 7.2973525693e-3
NON_RELATIVISTIC_LIMIT = 0.1

# 2 alpha / (3 pi) is the prefactor of every low-frequency exponent.
_TWO_OVER_THREE_PI = 2.0 / (3.0 * math.pi)


class PhysicalParams(FrozenModel):
    """Dimensionless description of the particle and the field cutoffs."""

    alpha: float = Field(FINE_STRUCTURE, gt=0.0)
    omega_uv: float = Field(1.0, gt=0.0)
    omega_ir: float = Field(1e-2, gt=0.0)
    mass_ratio_m_over_m0: float = Field(1.0, gt=0.0)
    kinetic_scale_chi: float = Field(0.0, ge=0.0)
    uv_energy_ratio: float = Field(1e-3, ge=0.0)
    mass_cutoff: CutoffShape = CutoffShape.EXPONENTIAL

    @model_validator(mode="after")
    def _check_cutoff_order(self) -> "PhysicalParams":
        if self.omega_ir > self.omega_uv:
            raise ValueError(
                f"omega_ir ({self.omega_ir}) must not exceed omega_uv ({self.omega_uv})"
            )
        return self

    @property
    def r(self) -> float:
        """varpi / Omega, in (0, 1]."""
        return self.omega_ir / self.omega_uv

    @property
    def coupling(self) -> float:
        """2 alpha / (3 pi)."""
        return _TWO_OVER_THREE_PI * self.alpha


class MomentumPair(FrozenModel):
    """Two collinear momenta in units of m0 c."""

    u: float
    u_prime: float

    @model_validator(mode="after")
    def _check_finite(self) -> "MomentumPair":
        if not (math.isfinite(self.u) and math.isfinite(self.u_prime)):
            raise ValueError("momenta must be finite")
        for value in (self.u, self.u_prime):
            if abs(value) > NON_RELATIVISTIC_LIMIT:
                logger.warning(
                    "|u| = %.3g exceeds %.1f; the non-relativistic model is being "
                    "evaluated outside its range", abs(value), NON_RELATIVISTIC_LIMIT,
                )
        return self

    @classmethod
    def from_vectors(cls, p: Sequence[float], p_prime: Sequence[float]) -> "MomentumPair":
        """Reduce two collinear 3-vectors to signed scalars along their common axis."""
        a = np.asarray(p, dtype=float)
        b = np.asarray(p_prime, dtype=float)
        if a.shape != (3,) or b.shape != (3,):
            raise DomainError("momentum vectors must have three components")
        cross = np.cross(a, b)
        scale = max(float(np.linalg.norm(a)), float(np.linalg.norm(b)), 1.0)
        if float(np.linalg.norm(cross)) > 1e-12 * scale * scale:
            raise DomainError("momentum vectors are not collinear")
        reference = a if np.linalg.norm(a) >= np.linalg.norm(b) else b
        norm = float(np.linalg.norm(reference))
        if norm == 0.0:
            return cls(u=0.0, u_prime=0.0)
        axis = reference / norm
        return cls(u=float(a @ axis), u_prime=float(b @ axis))

    @property
    def separation_squared(self) -> float:
        """|u - u'|^2."""
        return (self.u - self.u_prime) ** 2

    @property
    def kinetic_difference(self) -> float:
        """u^2 - u'^2."""
        return self.u * self.u - self.u_prime * self.u_prime

    def qp_factor(self, params: PhysicalParams) -> float:
        """(2 alpha / 3 pi) (u^2 - u'^2), the prefactor of the phase exponent."""
        return params.coupling * self.kinetic_difference


def q_factor(pair: MomentumPair, params: PhysicalParams) -> float:
    """Decoherence strength Q = (2 alpha / 3 pi) |u - u'|^2."""
    return params.coupling * pair.separation_squared


def delta_m_over_m0(params: PhysicalParams) -> float:
    """Total electromagnetic mass shift delta m / m0 with exponential UV cutoff."""
    return (
        2.0 * params.coupling
        * params.uv_energy_ratio
        * params.mass_ratio_m_over_m0 ** 2
    )


def delta_m_above(params: PhysicalParams) -> float:
    """delta m_{>varpi} / m0: the share of the mass shift from modes above varpi.

    The exponential variant integrates exp(-omega/Omega) from varpi to
    infinity, giving the factor exp(-r).  The step variant integrates a
    flat weight between varpi and Omega, giving (1 - r).
    """
    if params.mass_cutoff is CutoffShape.STEP:
        weight = 1.0 - params.r
    else:
        weight = math.exp(-params.r)
    return delta_m_over_m0(params) * weight


def delta_m_below(params: PhysicalParams) -> float:
    """delta m_{<varpi} / m0 = (delta m - delta m_{>varpi}) / m0."""
    total = delta_m_over_m0(params)
    if params.mass_cutoff is CutoffShape.STEP:
        return total * params.r
    return total * -math.expm1(-params.r)


def m_varpi_over_m(params: PhysicalParams) -> float:
    """m_varpi / m from 1/m_varpi = (1/m)(1 + delta m_{<varpi}/m)."""
    below_over_m = delta_m_below(params) / params.mass_ratio_m_over_m0
    return 1.0 / (1.0 + below_over_m)


def mass_ratio_for_regime(params: PhysicalParams, regime: Regime) -> float:
    """m0 / m_kin for the mass that drives the free phase in ``regime``."""
    if regime is Regime.UNCORRELATED:
        return 1.0
    m_over_m0 = params.mass_ratio_m_over_m0
    if regime is Regime.FULLY_CORRELATED:
        return 1.0 / m_over_m0
    return 1.0 / (m_over_m0 * m_varpi_over_m(params))


def phase_prefactor(
    pair: MomentumPair,
    params: PhysicalParams,
    regime: Regime = Regime.PARTIALLY_CORRELATED,
) -> float:
    """Coefficient of tau = varpi t in the free phase exp(-i prefactor tau).

    Returns (u^2 - u'^2) (m0/m_kin) chi / 2, with m_kin = m_varpi for the
    partially correlated regime.
    """
    return (
        pair.kinetic_difference
        * mass_ratio_for_regime(params, regime)
        * params.kinetic_scale_chi
        / 2.0
    )
