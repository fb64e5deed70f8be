"""
decoherence.py
--------------

Closed-form decoherence exponents for the three initial conditions.

All functions take the dimensionless strengths

    Q  = (2 alpha / 3 pi) |u - u'|^2      (magnitude suppression)
    Qp = (2 alpha / 3 pi) (u^2 - u'^2)    (phase)

and a dimensionless time.  Partially correlated states use tau = varpi t
and the step cutoff Theta(varpi - omega); uncorrelated states use
tau_uv = Omega t and the exponential cutoff exp(-omega/Omega).  The two
cutoff conventions are never mixed inside one regime.

The time-independent dressing factor of the fully correlated state carries
the prefactor alpha/(3 pi), exactly half of the 2 alpha/(3 pi) in front of
the low-frequency exponents.  ``DRESSING_SHARE`` holds that factor so it
appears in one place only.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from ..errors import DomainError
from ..models.regime import DressingForm, Regime, VacuumForm
from .specfun import EULER_GAMMA, cin, cin_array, ein, sin_deficit

logger = logging.getLogger(__name__)

DRESSING_SHARE = 0.5


class AsymptoticBranch(str, Enum):
    SMALL = "small"
    LARGE = "large"


@dataclass(frozen=True)
class DecoherenceValue:
    """Gamma = gamma_real + i gamma_imag at one time for one element."""

    gamma_real: float
    gamma_imag: float
    regime: Regime
    tau: float

    def __post_init__(self) -> None:
        if self.gamma_real > 0.0:
            raise DomainError(f"gamma_real must be <= 0, got {self.gamma_real!r}")

    @property
    def magnitude(self) -> float:
        """exp(gamma_real), in (0, 1]."""
        return math.exp(self.gamma_real)

    @property
    def factor(self) -> complex:
        return complex(math.cos(self.gamma_imag), math.sin(self.gamma_imag)) * self.magnitude


@dataclass(frozen=True)
class DressingResult:
    value: float
    exponent: float
    divergent: bool = False


class TransitionSummary(NamedTuple):
    t_tilde: float
    gamma_at_transition: float


def _check_strength(Q: float) -> None:
    if not Q >= 0.0:
        raise DomainError(f"Q must be >= 0, got {Q!r}")


# -- partially correlated: step cutoff at varpi --------------------------------

def gamma_vac_partial(Q: float, tau: float) -> float:
    """-Q [gamma - Ci(tau) + ln tau] for tau = varpi t > 0."""
    _check_strength(Q)
    if not tau > 0.0:
        raise DomainError(f"gamma_vac_partial requires tau > 0, got {tau!r}")
    return -Q * cin(tau)


def gamma_vac_partial_total(Q: float, tau: float) -> float:
    """``gamma_vac_partial`` extended by its limit 0 at tau = 0."""
    if tau == 0.0:
        _check_strength(Q)
        return 0.0
    return gamma_vac_partial(Q, tau)


def gamma_vac_partial_curve(Q: float, taus) -> np.ndarray:
    """``gamma_vac_partial_total`` over an array of tau >= 0."""
    _check_strength(Q)
    taus = np.asarray(taus, dtype=float)
    if np.any(~(taus >= 0.0)):
        raise DomainError("gamma_vac_partial_curve requires tau >= 0")
    return -Q * cin_array(taus)


def gamma_i_partial(Qp: float, tau: float) -> float:
    """Qp [tau - Si(tau)] for tau = varpi t >= 0."""
    if not tau >= 0.0:
        raise DomainError(f"gamma_i_partial requires tau >= 0, got {tau!r}")
    return Qp * sin_deficit(tau)


def gamma_vac_asymptotic(Q: float, tau: float, branch: AsymptoticBranch) -> float:
    """Quadratic law -Q tau^2/4 (small) or logarithmic law -Q ln tau (large)."""
    if AsymptoticBranch(branch) is AsymptoticBranch.SMALL:
        return -Q * tau * tau / 4.0
    return -Q * math.log(tau)


def gamma_partial(
    Q: float, Qp: float, tau: float, vac_form: VacuumForm = VacuumForm.EXACT
) -> DecoherenceValue:
    """Full low-frequency exponent of a partially correlated element at tau."""
    if vac_form is VacuumForm.ASYMPTOTIC and tau > 0.0:
        branch = AsymptoticBranch.SMALL if tau < 1.0 else AsymptoticBranch.LARGE
        real = min(gamma_vac_asymptotic(Q, tau, branch), 0.0)
    else:
        real = gamma_vac_partial_total(Q, tau)
    return DecoherenceValue(real, gamma_i_partial(Qp, tau), Regime.PARTIALLY_CORRELATED, tau)


def transition_summary(Q: float, varpi: float) -> TransitionSummary:
    """Crossover time 1/varpi and |Gamma_vac| there, Q (gamma - Ci(1))."""
    if not varpi > 0.0:
        raise DomainError(f"varpi must be > 0, got {varpi!r}")
    return TransitionSummary(1.0 / varpi, -gamma_vac_partial(Q, 1.0))


# -- fully correlated: time-independent dressing factor ------------------------

def dressing_series(r: float) -> float:
    """sum_{n>=1} (-1)^n r^n / (n n!), which is -Ein(r)."""
    return -ein(r)


def dressing_exponent(
    Q: float, r: float, form: DressingForm = DressingForm.SERIES
) -> float:
    """Logarithm of the dressing factor; the bracket equals -E1(r)."""
    _check_strength(Q)
    if not 0.0 < r <= 1.0:
        raise DomainError(f"r = varpi/Omega must lie in (0, 1], got {r!r}")
    if form is DressingForm.LOG_APPROX:
        if r > 0.1:
            logger.warning("log approximation of the dressing factor used at r = %.3g", r)
        bracket = math.log(r)
    else:
        bracket = EULER_GAMMA + math.log(r) + dressing_series(r)
    return DRESSING_SHARE * Q * bracket


def dressing(Q: float, r: float, form: DressingForm = DressingForm.SERIES) -> DressingResult:
    """Dressing factor with an explicit flag for the infrared-divergent r = 0."""
    _check_strength(Q)
    if r == 0.0:
        return DressingResult(0.0 if Q > 0.0 else 1.0, -math.inf if Q > 0.0 else 0.0, True)
    exponent = dressing_exponent(Q, r, form)
    return DressingResult(math.exp(exponent), exponent)


def dressing_factor_full(Q: float, r: float, form: DressingForm = DressingForm.SERIES) -> float:
    """Overlap magnitude of two dressed momentum states, in [0, 1]."""
    return dressing(Q, r, form).value


# -- uncorrelated: exponential cutoff at Omega ---------------------------------

def _tau_minus_arctan(x: float) -> float:
    if x < 0.1:
        x2 = x * x
        total = 0.0
        power = x
        for k in range(1, 9):
            power *= x2
            term = power / (2 * k + 1)
            total += term if k % 2 else -term
        return total
    return x - math.atan(x)


def gamma_uncorrelated(Q: float, Qp: float, tau_uv: float) -> DecoherenceValue:
    """Gamma_r = -(Q/2) ln(1 + tau_uv^2), Gamma_i = Qp (tau_uv - arctan tau_uv)."""
    _check_strength(Q)
    if not tau_uv >= 0.0:
        raise DomainError(f"gamma_uncorrelated requires tau_uv >= 0, got {tau_uv!r}")
    real = -0.5 * Q * math.log1p(tau_uv * tau_uv)
    imag = Qp * _tau_minus_arctan(tau_uv)
    return DecoherenceValue(real, imag, Regime.UNCORRELATED, tau_uv)


def uncorrelated_limit_gap(Q: float, tau: float) -> float:
    """Partial minus uncorrelated real exponent at varpi = Omega and equal times.

    Both grow like -Q ln tau; the gap stays bounded and tends to -Q gamma,
    the offset produced by the different cutoff shapes.
    """
    return gamma_vac_partial(Q, tau) - gamma_uncorrelated(Q, 0.0, tau).gamma_real
