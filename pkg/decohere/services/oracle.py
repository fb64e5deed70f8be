"""
oracle.py
---------

Brute-force numerical checks for every frequency integral behind the
closed forms.  Nothing here calls the closed forms themselves: the oracle
integrates the spectral kernels directly, so agreement between the two is
evidence that the closed forms were transcribed correctly.

Three kernels cover all the integrals:

* ``ONE_MINUS_COS``   (1 - cos omega t) / omega   real part of Gamma
* ``T_MINUS_SIN``     t - sin(omega t) / omega    imaginary part of Gamma
* ``ONE_OVER_OMEGA``  1 / omega                   initial dressing factor

each multiplied by a cutoff: an exponential exp(-omega/Omega), a step
Theta(varpi - omega), or a hard lower edge combined with the exponential.

``integrate`` splits the domain into panels no wider than pi/(4t) (so that
each panel sees at most an eighth of an oscillation), grades them
geometrically towards the lower edge, and evaluates every panel with two
Gauss-Legendre rules.  Panels whose two estimates disagree are bisected
until the summed disagreement is inside the tolerance.  Panel sums are
accumulated with ``math.fsum`` in left-to-right order, so identical inputs
give bit-identical outputs.

``discrete_overlap_exponent`` is the other half of the oracle: it sums
(Delta g)^2 / (2 hbar^2 omega^2) over a finite lattice of modes, which must
approach the continuum integral as the lattice is refined.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from ..errors import DomainError, NumericalError
from ..models.physical import MomentumPair, PhysicalParams, q_factor
from ..models.regime import CutoffShape
from .specfun import EULER_GAMMA

logger = logging.getLogger(__name__)

# exp(-42) ~ 5.7e-19: beyond lower + 42 Omega the exponential tail is negligible
EXPONENTIAL_SPAN = 42.0
MAX_PANEL_PHASE = math.pi / 4.0
MAX_PANELS = 1_000_000
MAX_ROUNDS = 60
ABS_FLOOR = 1e-14
REFERENCE_SWITCH = 4.0

_LOW_NODES, _LOW_WEIGHTS = np.polynomial.legendre.leggauss(15)
_HIGH_NODES, _HIGH_WEIGHTS = np.polynomial.legendre.leggauss(30)


class KernelKind(str, Enum):
    ONE_MINUS_COS = "one_minus_cos_over_omega"
    T_MINUS_SIN = "t_minus_sin_over_omega"
    ONE_OVER_OMEGA = "one_over_omega"


@dataclass(frozen=True)
class Cutoff:
    """Spectral weight and support of a frequency integral.

    ``shape`` EXPONENTIAL uses exp(-omega/scale) on [lower, upper or inf);
    ``shape`` STEP is the flat window [lower, scale].
    """

    shape: CutoffShape
    scale: float
    lower: float = 0.0
    upper: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.scale > 0.0:
            raise DomainError(f"cutoff scale must be > 0, got {self.scale!r}")
        if self.lower < 0.0:
            raise DomainError(f"cutoff lower edge must be >= 0, got {self.lower!r}")
        if self.shape is CutoffShape.STEP and self.lower >= self.scale:
            raise DomainError("step cutoff window is empty")
        if self.upper is not None and self.upper <= self.lower:
            raise DomainError("cutoff upper edge must exceed the lower edge")

    @classmethod
    def exponential(cls, omega_uv: float) -> "Cutoff":
        return cls(CutoffShape.EXPONENTIAL, omega_uv)

    @classmethod
    def step(cls, omega_ir: float) -> "Cutoff":
        return cls(CutoffShape.STEP, omega_ir)

    @classmethod
    def step_low_exponential(
        cls, omega_ir: float, omega_uv: float, upper: Optional[float] = None
    ) -> "Cutoff":
        return cls(CutoffShape.EXPONENTIAL, omega_uv, lower=omega_ir, upper=upper)

    def support(self) -> Tuple[float, float]:
        if self.shape is CutoffShape.STEP:
            return self.lower, self.scale
        end = self.lower + EXPONENTIAL_SPAN * self.scale
        if self.upper is not None:
            end = min(end, self.upper)
        return self.lower, end

    def weight(self, omega: np.ndarray) -> np.ndarray:
        if self.shape is CutoffShape.STEP:
            return np.ones_like(omega)
        return np.exp(-omega / self.scale)


@dataclass(frozen=True)
class SpectralKernel:
    kind: KernelKind
    cutoff: Cutoff
    time: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.time) and self.time >= 0.0):
            raise DomainError(f"kernel time must be finite and >= 0, got {self.time!r}")
        if self.kind is KernelKind.ONE_OVER_OMEGA and self.cutoff.lower == 0.0:
            raise DomainError("1/omega kernel diverges without a lower cutoff")

    @property
    def oscillatory(self) -> bool:
        return self.kind is not KernelKind.ONE_OVER_OMEGA and self.time > 0.0

    def __call__(self, omega: np.ndarray) -> np.ndarray:
        t = self.time
        if self.kind is KernelKind.ONE_OVER_OMEGA:
            core = 1.0 / omega
        elif self.kind is KernelKind.ONE_MINUS_COS:
            half = np.sin(0.5 * omega * t)
            core = 2.0 * half * half / omega
        else:
            core = _t_minus_sin(omega, t)
        return core * self.cutoff.weight(omega)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error: float
    panels: int


@dataclass(frozen=True)
class ModeGrid:
    """Midpoint lattice of field frequencies on [omega_min, omega_max]."""

    omega_max: float
    n_modes: int
    omega_min: float = 0.0

    def __post_init__(self) -> None:
        if self.n_modes < 1:
            raise DomainError("a mode grid needs at least one mode")
        if not self.omega_max > self.omega_min >= 0.0:
            raise DomainError("mode grid requires 0 <= omega_min < omega_max")

    @property
    def spacing(self) -> float:
        return (self.omega_max - self.omega_min) / self.n_modes

    def frequencies(self) -> np.ndarray:
        # Midpoints never touch the omega = 0 mode.
        return self.omega_min + (np.arange(self.n_modes) + 0.5) * self.spacing


def _t_minus_sin(omega: np.ndarray, t: float) -> np.ndarray:
    x = omega * t
    x2 = x * x
    # t (x^2/3! - x^4/5! + ... - x^12/13!) below x = 0.1, where t - sin(x)/omega cancels
    series = t * x2 * (
        1.0 / 6.0 - x2 * (
            1.0 / 120.0 - x2 * (
                1.0 / 5040.0 - x2 * (
                    1.0 / 362880.0 - x2 * (
                        1.0 / 39916800.0 - x2 / 6227020800.0)))))
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = t - np.sin(x) / omega
    return np.where(x < 0.1, series, direct)


def _initial_breakpoints(kernel: SpectralKernel, a: float, b: float) -> np.ndarray:
    points = [np.array([a, b])]
    if kernel.oscillatory:
        n = int(math.ceil((b - a) * kernel.time / MAX_PANEL_PHASE))
        points.append(np.linspace(a, b, n + 1))
    lo = a if a > 0.0 else b * 1e-8
    if lo < b:
        points.append(np.geomspace(lo, b, 33))
    return np.unique(np.concatenate(points))


def _panel_rules(kernel: SpectralKernel, left: np.ndarray, right: np.ndarray):
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    low = (kernel(mid[:, None] + half[:, None] * _LOW_NODES) @ _LOW_WEIGHTS) * half
    high = (kernel(mid[:, None] + half[:, None] * _HIGH_NODES) @ _HIGH_WEIGHTS) * half
    return high, np.abs(high - low)


def integrate(kernel: SpectralKernel, rel_tol: float = 1e-10) -> QuadratureResult:
    """
    Adaptive panel quadrature of ``kernel`` over its cutoff support.

    Panels are bisected where their Gauss-Legendre error estimate exceeds
    an equal share of the target until the summed estimate meets it.

    Parameters
    ----------
    kernel : SpectralKernel
        Integrand kind, cutoff and time.  Kernels other than 1/omega vanish
        identically at time 0.
    rel_tol : float
        Relative tolerance in [1e-14, 1e-4].  An absolute floor of
        ABS_FLOOR is added to the target.

    Returns
    -------
    QuadratureResult
        Value, summed error estimate and the number of panels used.

    Raises
    ------
    NumericalError
        If MAX_ROUNDS bisection rounds or MAX_PANELS panels are exhausted.
    """
    if not 1e-14 <= rel_tol <= 1e-4:
        raise DomainError(f"rel_tol must lie in [1e-14, 1e-4], got {rel_tol!r}")
    if kernel.kind is not KernelKind.ONE_OVER_OMEGA and kernel.time == 0.0:
        return QuadratureResult(0.0, 0.0, 0)

    a, b = kernel.cutoff.support()
    edges = _initial_breakpoints(kernel, a, b)
    left, right = edges[:-1], edges[1:]
    values, errors = _panel_rules(kernel, left, right)

    for _ in range(MAX_ROUNDS):
        total = math.fsum(values)
        error = math.fsum(errors)
        target = rel_tol * abs(total) + ABS_FLOOR
        if error <= target:
            return QuadratureResult(total, error, int(left.size))
        if left.size > MAX_PANELS:
            break
        share = target / left.size
        split = errors > share
        keep = ~split
        mid = 0.5 * (left[split] + right[split])
        new_left = np.concatenate([left[split], mid])
        new_right = np.concatenate([mid, right[split]])
        new_values, new_errors = _panel_rules(kernel, new_left, new_right)

        left = np.concatenate([left[keep], new_left])
        right = np.concatenate([right[keep], new_right])
        values = np.concatenate([values[keep], new_values])
        errors = np.concatenate([errors[keep], new_errors])
        order = np.argsort(left, kind="stable")
        left, right = left[order], right[order]
        values, errors = values[order], errors[order]

    error = math.fsum(errors)
    logger.error("quadrature of %s failed after %d panels", kernel.kind.value, left.size)
    raise NumericalError(f"quadrature of {kernel.kind.value} did not converge", error)


def _fourier_tail(x: float, weight: str) -> float:
    """int_x^inf cos(u)/u du or sin(u)/u du by QUADPACK's Fourier routine."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, abserr = quad(lambda u: 1.0 / u, x, np.inf, weight=weight, wvar=1.0,
                             epsabs=1e-13, limlst=200)
    if abserr > 1e-10:
        raise NumericalError(f"Fourier tail ({weight}) at x={x!r} did not converge", abserr)
    return value


def cosint_reference(x: float, rel_tol: float = 1e-12) -> float:
    """Ci(x) from quadrature alone."""
    if not x > 0.0:
        raise DomainError(f"cosint_reference requires x > 0, got {x!r}")
    if x <= REFERENCE_SWITCH:
        kernel = SpectralKernel(KernelKind.ONE_MINUS_COS, Cutoff.step(1.0), time=x)
        return EULER_GAMMA + math.log(x) - integrate(kernel, rel_tol).value
    return -_fourier_tail(x, "cos")


def sinint_reference(x: float, rel_tol: float = 1e-12) -> float:
    """Si(x) from quadrature alone."""
    if not x >= 0.0:
        raise DomainError(f"sinint_reference requires x >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    if x <= REFERENCE_SWITCH:
        kernel = SpectralKernel(KernelKind.T_MINUS_SIN, Cutoff.step(1.0), time=x)
        return x - integrate(kernel, rel_tol).value
    return 0.5 * math.pi - _fourier_tail(x, "sin")


def expint_reference(x: float, rel_tol: float = 1e-12) -> float:
    """E1(x) from quadrature alone."""
    kernel = SpectralKernel(
        KernelKind.ONE_OVER_OMEGA, Cutoff.step_low_exponential(x, 1.0)
    )
    return integrate(kernel, rel_tol).value


def discrete_overlap_exponent(
    pair: MomentumPair, grid: ModeGrid, params: PhysicalParams
) -> float:
    """Summed exponent of the discrete coherent-state overlap product.

    Polarisation and angular sums are already reduced to the scalar factor
    alpha |Delta u|^2 / (3 pi) = Q/2, leaving
    (Q/2) sum_k exp(-omega_k/Omega) / omega_k * d omega.
    The midpoint rule underestimates this convex integrand, so the sum
    approaches the continuum value from below.
    """
    omega = grid.frequencies()
    terms = np.exp(-omega / params.omega_uv) / omega
    return 0.5 * q_factor(pair, params) * math.fsum(terms) * grid.spacing


def discrete_overlap(pair: MomentumPair, grid: ModeGrid, params: PhysicalParams) -> float:
    """The coherent-state overlap product itself, exp(-exponent)."""
    return math.exp(-discrete_overlap_exponent(pair, grid, params))
