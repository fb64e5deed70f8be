"""
specfun.py
----------

Sine, cosine and exponential integrals for real positive arguments.

The decoherence closed forms only ever need Si, Ci and E1 on the positive
real axis, so this module implements exactly that instead of pulling in a
general special-function library.  Every function switches between two
evaluations:

* a power series for small arguments, summed until the next term no
  longer changes the double-precision result;
* a continued fraction for large arguments (modified Lentz algorithm),
  applied to E1(ix) for Si/Ci and to E1(x) directly.

The switch points are ``CISI_SWITCH = 4`` and ``E1_SWITCH = 1``.  Both
branches are accurate to a few ulps at the switch, so results are
continuous there to well below 1e-12.

Besides the plain functions the module exposes the entire functions that
the physics actually consumes:

* ``cin(x)  = gamma + ln x - Ci(x)``
* ``sin_deficit(x) = x - Si(x)``
* ``ein(x)  = gamma + ln x + E1(x)``

Evaluating these directly avoids the cancellation that the naive
composition suffers for small ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from ..errors import DomainError

EULER_GAMMA = 0.5772156649015329

CISI_SWITCH = 4.0
E1_SWITCH = 1.0

_EPS = np.finfo(float).eps
_FPMIN = 1e-300
_MAX_TERMS = 200


@dataclass(frozen=True)
class SpecFunResult:
    value: float
    est_abs_error: float
    branch: str


def _require_positive(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"{name} requires a finite argument > 0, got {x!r}")
    return x


def _require_nonnegative(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"{name} requires a finite argument >= 0, got {x!r}")
    return x


# -- series kernels ---------------------------------------------------------

def _odd_series(x: float) -> Tuple[float, float]:
    """Sum_{k>=1} (-1)^(k+1) x^(2k+1) / ((2k+1)(2k+1)!), i.e. x - Si(x)."""
    x2 = x * x
    fact_term = x  # x^(2k+1)/(2k+1)!, starts at k = 0
    total = 0.0
    magnitude = 0.0
    for k in range(1, _MAX_TERMS):
        fact_term *= x2 / ((2 * k) * (2 * k + 1))
        term = fact_term / (2 * k + 1)
        if k % 2 == 0:
            term = -term
        total += term
        magnitude += abs(term)
        if abs(term) <= _EPS * abs(total) * 0.25:
            break
    return total, 4.0 * _EPS * magnitude


def _even_series(x: float) -> Tuple[float, float]:
    """Sum_{k>=1} (-1)^(k+1) x^(2k) / (2k (2k)!), i.e. gamma + ln x - Ci(x)."""
    x2 = x * x
    fact_term = 1.0  # x^(2k)/(2k)!
    total = 0.0
    magnitude = 0.0
    for k in range(1, _MAX_TERMS):
        fact_term *= x2 / ((2 * k - 1) * (2 * k))
        term = fact_term / (2 * k)
        if k % 2 == 0:
            term = -term
        total += term
        magnitude += abs(term)
        if abs(term) <= _EPS * abs(total) * 0.25:
            break
    return total, 4.0 * _EPS * magnitude


def _ein_series(x: float) -> Tuple[float, float]:
    """Sum_{n>=1} (-1)^(n+1) x^n / (n n!), i.e. gamma + ln x + E1(x)."""
    fact_term = 1.0
    total = 0.0
    magnitude = 0.0
    for n in range(1, _MAX_TERMS):
        fact_term *= x / n
        term = fact_term / n
        if n % 2 == 0:
            term = -term
        total += term
        magnitude += abs(term)
        if abs(term) <= _EPS * abs(total) * 0.25:
            break
    return total, 4.0 * _EPS * magnitude


# -- continued fractions ----------------------------------------------------

def _e1_imaginary_cf(x: float) -> complex:
    """E1(ix) * exp(ix) by the modified Lentz algorithm (x > 0)."""
    b = complex(1.0, x)
    c = complex(1.0 / _FPMIN, 0.0)
    d = 1.0 / b
    h = d
    for i in range(2, 10_000):
        a = -float((i - 1) * (i - 1))
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta.real - 1.0) + abs(delta.imag) < _EPS:
            return h
    raise DomainError(f"continued fraction for Ci/Si did not converge at x={x!r}")


def _cisi_large(x: float) -> Tuple[float, float]:
    h = _e1_imaginary_cf(x) * complex(math.cos(x), -math.sin(x))
    return -h.real, 0.5 * math.pi + h.imag


def _e1_cf(x: float) -> float:
    b = x + 1.0
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h * math.exp(-x)
    raise DomainError(f"continued fraction for E1 did not converge at x={x!r}")


# -- public functions -------------------------------------------------------

def cosint(x: float) -> SpecFunResult:
    """Ci(x) = gamma + ln x + int_0^x (cos u - 1)/u du, for x > 0."""
    x = _require_positive("cosint", x)
    if x <= CISI_SWITCH:
        s, err = _even_series(x)
        log_x = math.log(x)
        value = EULER_GAMMA + log_x - s
        err += 2.0 * _EPS * (EULER_GAMMA + abs(log_x) + abs(value))
        return SpecFunResult(value, err, "series")
    ci, _ = _cisi_large(x)
    return SpecFunResult(ci, 8.0 * _EPS * max(abs(ci), 1.0 / x), "continued_fraction")


def sinint(x: float) -> SpecFunResult:
    """Si(x) = int_0^x sin u / u du, for x >= 0."""
    x = _require_nonnegative("sinint", x)
    if x == 0.0:
        return SpecFunResult(0.0, 0.0, "series")
    if x <= CISI_SWITCH:
        deficit, err = _odd_series(x)
        value = x - deficit
        return SpecFunResult(value, err + 2.0 * _EPS * abs(value), "series")
    _, si = _cisi_large(x)
    return SpecFunResult(si, 8.0 * _EPS * max(abs(si), 1.0), "continued_fraction")


def expint_e1(x: float) -> SpecFunResult:
    """E1(x) = int_x^inf exp(-u)/u du, for x > 0."""
    x = _require_positive("expint_e1", x)
    if x <= E1_SWITCH:
        s, err = _ein_series(x)
        log_x = math.log(x)
        value = s - EULER_GAMMA - log_x
        err += 2.0 * _EPS * (EULER_GAMMA + abs(log_x) + abs(value))
        return SpecFunResult(value, err, "series")
    value = _e1_cf(x)
    return SpecFunResult(value, 8.0 * _EPS * abs(value), "continued_fraction")


def cin(x: float) -> float:
    """gamma + ln x - Ci(x); zero at x = 0 and nondecreasing."""
    x = _require_nonnegative("cin", x)
    if x == 0.0:
        return 0.0
    if x <= CISI_SWITCH:
        return _even_series(x)[0]
    ci, _ = _cisi_large(x)
    return EULER_GAMMA + math.log(x) - ci


def sin_deficit(x: float) -> float:
    """x - Si(x); zero at x = 0 and nondecreasing."""
    x = _require_nonnegative("sin_deficit", x)
    if x == 0.0:
        return 0.0
    if x <= CISI_SWITCH:
        return _odd_series(x)[0]
    _, si = _cisi_large(x)
    return x - si


def ein(x: float) -> float:
    """gamma + ln x + E1(x) = sum_{n>=1} (-1)^(n+1) x^n / (n n!)."""
    x = _require_nonnegative("ein", x)
    if x == 0.0:
        return 0.0
    if x <= E1_SWITCH:
        return _ein_series(x)[0]
    return EULER_GAMMA + math.log(x) + _e1_cf(x)


def _vectorize(func: Callable[[float], float], x) -> np.ndarray:
    values = np.asarray(x, dtype=float)
    flat = [func(v) for v in values.ravel()]
    return np.asarray(flat, dtype=float).reshape(values.shape)


def cin_array(x) -> np.ndarray:
    """Element-wise ``cin`` for an array of non-negative arguments."""
    return _vectorize(cin, x)
