"""Spherical Bessel functions, Legendre polynomials and Gauss-Legendre quadrature.

j_ell uses Miller's downward recurrence below the turning point (x < ell) and
upward recurrence above it; y_ell always recurs upward. Below ``SMALL_ARGUMENT``
both switch to their leading-order power laws.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, NamedTuple

import numpy as np

from .config import settings
from .errors import NumericDomainError

logger = logging.getLogger(__name__)

SMALL_ARGUMENT = 1e-6

# Miller recurrence renormalisation bounds
_RESCALE_ABOVE = 1e250
_RESCALE_BY = 1e-250


class BesselValues(NamedTuple):
    """j, j', y, y' of one order at one argument."""

    j: float
    j_prime: float
    y: float
    y_prime: float


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def double_factorial(n: int) -> float:
    """n!! with the conventions (-1)!! = 0!! = 1."""
    result = 1.0
    while n > 1:
        result *= n
        n -= 2
    return result


def _check_order(ell: int, x: float) -> None:
    if ell < 0:
        raise NumericDomainError(f"order must be non-negative, got {ell}")
    if ell > settings.max_ell:
        raise NumericDomainError(
            f"order {ell} exceeds the configured maximum {settings.max_ell}", ell=ell
        )
    if not x > 0.0:
        raise NumericDomainError(f"argument must be positive, got {x!r}", ell=ell)


def _j_table(ell_max: int, x: float) -> List[float]:
    if x < SMALL_ARGUMENT:
        return [x**ell / double_factorial(2 * ell + 1) for ell in range(ell_max + 1)]

    j0 = math.sin(x) / x
    j1 = math.sin(x) / (x * x) - math.cos(x) / x
    if ell_max == 0:
        return [j0]

    if x >= ell_max:
        values = [j0, j1]
        for ell in range(1, ell_max):
            values.append((2 * ell + 1) / x * values[ell] - values[ell - 1])
        return values

    # Miller: recur down from well above both ell_max and x, then normalise.
    start = 2 * (max(ell_max, math.ceil(x)) + 15)
    values = [0.0] * (ell_max + 1)
    f_upper, f = 0.0, 1.0
    for n in range(start, 0, -1):
        f_lower = (2 * n + 1) / x * f - f_upper
        f_upper, f = f, f_lower
        if n - 1 <= ell_max:
            values[n - 1] = f
        if abs(f) > _RESCALE_ABOVE:
            f *= _RESCALE_BY
            f_upper *= _RESCALE_BY
            values = [v * _RESCALE_BY for v in values]

    # f is now the unnormalised j_0, f_upper the unnormalised j_1
    if abs(j0) >= abs(j1):
        scale = j0 / f
    else:
        scale = j1 / f_upper
    return [v * scale for v in values]


def _y_table(ell_max: int, x: float) -> List[float]:
    if x < SMALL_ARGUMENT:
        return [
            -double_factorial(2 * ell - 1) / x ** (ell + 1) for ell in range(ell_max + 1)
        ]

    y0 = -math.cos(x) / x
    if ell_max == 0:
        return [y0]
    values = [y0, -math.cos(x) / (x * x) - math.sin(x) / x]
    for ell in range(1, ell_max):
        values.append((2 * ell + 1) / x * values[ell] - values[ell - 1])
    return values


def _derivative(table: List[float], ell: int, x: float) -> float:
    # f'_ell = f_{ell-1} - (ell+1)/x f_ell, and f'_0 = -f_1
    if ell == 0:
        return -table[1]
    return table[ell - 1] - (ell + 1) / x * table[ell]


# ---------------------------------------------------------------------------
# Spherical Bessel functions
# ---------------------------------------------------------------------------


def sph_bessel_j(ell: int, x: float) -> float:
    _check_order(ell, x)
    return _j_table(ell, x)[ell]


def sph_bessel_y(ell: int, x: float) -> float:
    _check_order(ell, x)
    return _y_table(ell, x)[ell]


def sph_bessel_j_prime(ell: int, x: float) -> float:
    _check_order(ell, x)
    return _derivative(_j_table(ell + 1, x), ell, x)


def sph_bessel_y_prime(ell: int, x: float) -> float:
    _check_order(ell, x)
    return _derivative(_y_table(ell + 1, x), ell, x)


def bessel_values(ell: int, x: float) -> BesselValues:
    """All four radial ingredients of order ``ell`` from one pair of tables."""
    _check_order(ell, x)
    js = _j_table(ell + 1, x)
    ys = _y_table(ell + 1, x)
    return BesselValues(
        j=js[ell],
        j_prime=_derivative(js, ell, x),
        y=ys[ell],
        y_prime=_derivative(ys, ell, x),
    )


# ---------------------------------------------------------------------------
# Legendre polynomials
# ---------------------------------------------------------------------------


def legendre_p(ell: int, x: float) -> float:
    if ell < 0:
        raise NumericDomainError(f"order must be non-negative, got {ell}")
    if abs(x) > 1.0:
        raise NumericDomainError(f"Legendre argument must lie in [-1, 1], got {x!r}")
    if ell == 0:
        return 1.0
    p_prev, p = 1.0, x
    for n in range(1, ell):
        p_prev, p = p, ((2 * n + 1) * x * p - n * p_prev) / (n + 1)
    return p


def legendre_table(ell_max: int, x: np.ndarray) -> np.ndarray:
    """Rows P_0..P_ell_max evaluated on every entry of ``x``."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise NumericDomainError("Legendre argument must lie in [-1, 1]")
    table = np.empty((ell_max + 1,) + x.shape)
    table[0] = 1.0
    if ell_max >= 1:
        table[1] = x
    for n in range(1, ell_max):
        table[n + 1] = ((2 * n + 1) * x * table[n] - n * table[n - 1]) / (n + 1)
    return table


# ---------------------------------------------------------------------------
# Gauss-Legendre quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return int(self.nodes.size)

    def integrate(self, values: np.ndarray) -> float:
        """Sum of weights * values, i.e. the integral over [-1, 1]."""
        return float(np.dot(self.weights, values))


def _legendre_and_derivative(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p_prev = np.ones_like(x)
    p = x.copy()
    for m in range(1, n):
        p_prev, p = p, ((2 * m + 1) * x * p - m * p_prev) / (m + 1)
    return p, n * (x * p - p_prev) / (x * x - 1.0)


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> QuadratureRule:
    """Nodes and weights from Newton iteration on P_n.

    Rules are cached and their arrays are read-only, so one rule is shared by
    every caller.
    """
    if n < 2:
        raise NumericDomainError(f"quadrature order must be at least 2, got {n}")

    k = np.arange(1, n + 1)
    x = np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre_and_derivative(n, x)
        step = p / dp
        x = x - step
        if np.max(np.abs(step)) < 5e-16:
            break

    _, dp = _legendre_and_derivative(n, x)
    weights = 2.0 / ((1.0 - x * x) * dp * dp)

    order = np.argsort(x)
    nodes = x[order]
    weights = weights[order]
    nodes.setflags(write=False)
    weights.setflags(write=False)
    logger.debug("Built %d-point Gauss-Legendre rule", n)
    return QuadratureRule(nodes=nodes, weights=weights)


def default_rule() -> QuadratureRule:
    return gauss_legendre(settings.quad_order)


def rule_for_degree(ell_max: int) -> QuadratureRule:
    """Configured rule, raised when needed so |F|^2 up to ``ell_max`` integrates exactly."""
    return gauss_legendre(max(settings.quad_order, ell_max + 2))
