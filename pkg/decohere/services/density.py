"""
density.py
----------

Momentum-space wave packets and their reduced density matrices.

Every element of the reduced density matrix has the form

    rho_ij(tau) = C_i C_j^* exp[-i phi_ij tau] exp[i Gamma_i,ij] exp[Gamma_r,ij]

where the real exponent is proportional to |u_i - u_j|^2 and the phases
to u_i^2 - u_j^2.  The decoherence services return these exponents per
unit Q and per unit Qp; this module scales them by the element-wise
strength matrices, so one call per time point suffices for the whole
matrix.  The real part is a Gaussian kernel in u_i - u_j and the phases
split into row and column factors, so every matrix built here is positive
semidefinite by construction.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DomainError, RegimeMismatchError
from ..models.base import FrozenModel
from ..models.physical import PhysicalParams, mass_ratio_for_regime
from ..models.regime import DressingForm, Regime, VacuumForm
from .decoherence import (
    DecoherenceValue,
    dressing_exponent,
    gamma_partial,
    gamma_uncorrelated,
)

logger = logging.getLogger(__name__)

MAX_GRID_POINTS = 256
NORM_TOLERANCE = 1e-12


class EvolveOptions(FrozenModel):
    vac_form: VacuumForm = VacuumForm.EXACT
    dressing_form: DressingForm = DressingForm.SERIES


@dataclass(frozen=True)
class WavePacket:
    """Collinear momenta u_i (strictly increasing) with normalised amplitudes C_i."""

    momenta: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        momenta = np.asarray(self.momenta, dtype=float)
        amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if momenta.ndim != 1 or momenta.shape != amplitudes.shape:
            raise DomainError("momenta and amplitudes must be 1-D arrays of equal length")
        if momenta.size > MAX_GRID_POINTS:
            raise DomainError(f"packets are limited to {MAX_GRID_POINTS} points")
        if momenta.size > 1 and not np.all(np.diff(momenta) > 0.0):
            raise DomainError("momenta must be strictly increasing")
        norm = float(np.sum(np.abs(amplitudes) ** 2))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise DomainError(f"amplitudes are not normalised (sum |C|^2 = {norm!r})")
        momenta.setflags(write=False)
        amplitudes.setflags(write=False)
        object.__setattr__(self, "momenta", momenta)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def size(self) -> int:
        return int(self.momenta.size)

    @property
    def probabilities(self) -> np.ndarray:
        """|C_i|^2, the diagonal every evolved matrix keeps."""
        return (self.amplitudes * self.amplitudes.conj()).real


@dataclass(frozen=True)
class ReducedDensityMatrix:
    entries: np.ndarray
    tau: float
    regime: Regime

    def __post_init__(self) -> None:
        self.entries.setflags(write=False)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def element(self, i: int, j: int) -> complex:
        return complex(self.entries[i, j])


def _normalise(amplitudes: np.ndarray) -> np.ndarray:
    norm = float(np.sqrt(np.sum(np.abs(amplitudes) ** 2)))
    if norm == 0.0:
        raise DomainError("amplitudes are all zero")
    return amplitudes / norm


def gaussian_packet(center: float, width: float, n: int, span: float = 3.0) -> WavePacket:
    """n-point Gaussian packet on [center - span width, center + span width]."""
    if not width > 0.0:
        raise DomainError(f"packet width must be > 0, got {width!r}")
    if n < 2:
        raise DomainError(f"packet needs n >= 2 points, got {n!r}")
    if not span > 0.0:
        raise DomainError(f"packet span must be > 0, got {span!r}")
    offsets = span * width * np.linspace(-1.0, 1.0, n)
    offsets = 0.5 * (offsets - offsets[::-1])  # exactly antisymmetric
    momenta = center + offsets
    amplitudes = np.exp(-(offsets ** 2) / (4.0 * width * width)).astype(complex)
    return WavePacket(momenta, _normalise(amplitudes))


def explicit_packet(momenta: Sequence[float], amplitudes: Sequence[complex]) -> WavePacket:
    """Packet from user-supplied points; amplitudes are normalised here."""
    return WavePacket(np.asarray(momenta, dtype=float),
                      _normalise(np.asarray(amplitudes, dtype=complex)))


def check_regime(params: PhysicalParams, regime: Regime) -> None:
    if regime is Regime.PARTIALLY_CORRELATED:
        if params.omega_ir >= params.omega_uv:
            raise RegimeMismatchError(
                "partially correlated states need omega_ir < omega_uv", field="omega_ir"
            )
        if params.r > 0.9:
            logger.warning(
                "r = %.3g is close to 1; the partially correlated form is near its "
                "uncorrelated limit", params.r,
            )


def element_exponent(
    Q: float,
    Qp: float,
    params: PhysicalParams,
    regime: Regime,
    tau: float,
    options: EvolveOptions = EvolveOptions(),
) -> DecoherenceValue:
    """Time-dependent decoherence exponent of one element at tau = varpi t."""
    regime = Regime(regime)
    if regime is Regime.FULLY_CORRELATED:
        return DecoherenceValue(0.0, 0.0, regime, tau)
    if regime is Regime.PARTIALLY_CORRELATED:
        return gamma_partial(Q, Qp, tau, options.vac_form)
    return gamma_uncorrelated(Q, Qp, tau / params.r)


def initial_exponent(
    Q: float,
    params: PhysicalParams,
    regime: Regime,
    options: EvolveOptions = EvolveOptions(),
) -> float:
    """Log of the time-independent dressing factor; zero for uncorrelated states."""
    if Regime(regime) is Regime.UNCORRELATED:
        return 0.0
    return dressing_exponent(Q, params.r, options.dressing_form)


def evolve(
    packet: WavePacket,
    params: PhysicalParams,
    regime: Regime,
    tau: float,
    options: EvolveOptions = EvolveOptions(),
) -> ReducedDensityMatrix:
    """
    Reduced density matrix of ``packet`` at tau = varpi t.

    Parameters
    ----------
    packet : WavePacket
        Momenta and normalised amplitudes.
    params : PhysicalParams
        Coupling, cutoffs and kinetic scale.
    regime : Regime
        Initial particle-field correlation.  The uncorrelated exponent is
        evaluated at Omega t = tau / r, so all three regimes share one
        physical clock.
    tau : float
        Dimensionless time, >= 0.
    options : EvolveOptions, optional
        Vacuum and dressing formula variants.

    Returns
    -------
    ReducedDensityMatrix
        Hermitian, unit-trace and positive semidefinite; the diagonal is
        the packet's probabilities at every tau.

    Raises
    ------
    DomainError
        For tau < 0.
    RegimeMismatchError
        For a partially correlated regime with omega_ir >= omega_uv.
    """
    if not tau >= 0.0:
        raise DomainError(f"tau must be >= 0, got {tau!r}")
    regime = Regime(regime)
    check_regime(params, regime)

    u = packet.momenta
    kinetic = np.subtract.outer(u * u, u * u)
    q = params.coupling * np.subtract.outer(u, u) ** 2
    qp = params.coupling * kinetic

    # Every exponent is linear in Q or Qp, so unit strengths scale to the matrix.
    unit = element_exponent(1.0, 1.0, params, regime, tau, options)
    per_q = unit.gamma_real + initial_exponent(1.0, params, regime, options)
    log_magnitude = per_q * q
    gamma_imag = unit.gamma_imag * qp

    free_phase = (
        kinetic * mass_ratio_for_regime(params, regime) * params.kinetic_scale_chi / 2.0
    ) * tau
    rho = np.outer(packet.amplitudes, packet.amplitudes.conj())
    rho = rho * np.exp(log_magnitude) * np.exp(1j * (gamma_imag - free_phase))

    # Mirror the upper triangle and pin the diagonal so Hermiticity and the
    # populations hold exactly.
    upper = np.triu(rho, 1)
    rho = upper + upper.conj().T
    rho[np.diag_indices_from(rho)] = packet.probabilities
    return ReducedDensityMatrix(rho, float(tau), regime)


def purity(rho: ReducedDensityMatrix) -> float:
    """Tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho."""
    return float(np.sum(np.abs(rho.entries) ** 2))


def coherence_l1(rho: ReducedDensityMatrix) -> float:
    """Sum of |rho_ij| over i != j."""
    off_diagonal = ~np.eye(rho.dim, dtype=bool)
    return float(np.sum(np.abs(rho.entries[off_diagonal])))


def min_eigenvalue(rho: ReducedDensityMatrix) -> float:
    return float(np.linalg.eigvalsh(rho.entries)[0])


def hermiticity_error(rho: ReducedDensityMatrix) -> float:
    return float(np.max(np.abs(rho.entries - rho.entries.conj().T)))


def trace_error(rho: ReducedDensityMatrix) -> float:
    return abs(complex(np.trace(rho.entries)) - 1.0)
