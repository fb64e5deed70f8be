"""
Enumerations shared across the package
--------------------------------------

``Regime`` names the three particle-field initial conditions.  The other
enums select between formula variants that the configuration exposes as
flags.
"""

from __future__ import annotations

from enum import Enum


class Regime(str, Enum):
    """Initial particle-field correlation."""

    UNCORRELATED = "uncorrelated"
    PARTIALLY_CORRELATED = "partially_correlated"
    FULLY_CORRELATED = "fully_correlated"


class CutoffShape(str, Enum):
    """Spectral cutoff applied to a frequency integral."""

    EXPONENTIAL = "exponential"
    STEP = "step"


class VacuumForm(str, Enum):
    """How the low-frequency vacuum exponent is evaluated."""

    EXACT = "exact"
    ASYMPTOTIC = "asymptotic"


class DressingForm(str, Enum):
    """How the time-independent dressing factor is evaluated."""

    SERIES = "series"
    LOG_APPROX = "log_approx"
