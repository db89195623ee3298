"""Boundary matching of the radial wave at r = a.

The analytic constants Gamma^(0) and Gamma^(1) are evaluated in closed form.
A central-difference log-derivative of R_ell serves as an independent oracle; since
(1/R)(dR/dr) is order-ambiguous for quaternions, both the left (R^{-1} R') and the
right (R' R^{-1}) products are computed. Disagreements are reported, never corrected.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Tuple

from .errors import (
    DegenerateMatchingError,
    NumericDomainError,
    SingularMatchingError,
    UnmatchableError,
)
from .partial_waves import ModeParams, radial_wave
from .quaternion import Quaternion, inverse, multiply
from .special import bessel_values

logger = logging.getLogger(__name__)

SINGULAR_THRESHOLD = 1e-12
UNMATCHABLE_NORM = 1e-12
DEFAULT_RELATIVE_STEP = 1e-6

Convention = Literal["left", "right"]
CONVENTIONS: Tuple[Convention, ...] = ("left", "right")


@dataclass(frozen=True)
class MatchingConstant:
    ell: int
    k: float
    a: float
    gamma0: float
    gamma1: complex

    def as_quaternion(self) -> Quaternion:
        return Quaternion(self.gamma0, self.gamma1)


@dataclass(frozen=True)
class ConventionResidual:
    convention: str
    numeric: Quaternion
    gamma0_residual: Optional[float]
    gamma1_residual: Optional[float]


@dataclass(frozen=True)
class MatchingResidualReport:
    ell: int
    k: float
    a: float
    gamma0: Optional[float]
    gamma1: Optional[complex]
    residuals: Tuple[ConventionResidual, ...]
    notes: Tuple[str, ...] = field(default_factory=tuple)

    def residual(self, convention: str) -> ConventionResidual:
        for entry in self.residuals:
            if entry.convention == convention:
                return entry
        raise KeyError(convention)


def _is_singular(value: float, *terms: float) -> bool:
    scale = max(abs(t) for t in terms)
    return abs(value) <= SINGULAR_THRESHOLD * scale


def _argument(k: float, a: float, ell: int) -> float:
    x = k * a
    if not x > 0.0:
        raise NumericDomainError(f"k*a must be positive, got {x!r}", ell=ell)
    return x


# ---------------------------------------------------------------------------
# Analytic constants
# ---------------------------------------------------------------------------


def gamma0(mode: ModeParams, k: float, a: float) -> float:
    b = bessel_values(mode.ell, _argument(k, a, mode.ell))
    tan2 = math.tan(mode.theta_pol) ** 2
    s, c = math.sin(mode.delta), math.cos(mode.delta)

    numerator = b.y * b.y_prime * tan2 + (b.y_prime * s + b.j_prime * c) * (b.j * c - b.y * s)
    first = b.y * b.y * tan2
    second = (b.y * s - b.j * c) ** 2
    denominator = first - second
    # second is a square of a difference; judge it against its unreduced terms
    if _is_singular(denominator, first, max(abs(b.y * s), abs(b.j * c)) ** 2):
        raise SingularMatchingError(
            f"Gamma^(0) denominator vanishes at ka={k * a:.6g}", ell=mode.ell
        )
    return k * numerator / denominator


def gamma1(mode: ModeParams, k: float, a: float) -> complex:
    tan_theta = math.tan(mode.theta_pol)
    if tan_theta == 0.0:
        return 0j

    b = bessel_values(mode.ell, _argument(k, a, mode.ell))
    s, c = math.sin(mode.delta), math.cos(mode.delta)
    denominator = c * b.j - s * b.y
    if _is_singular(denominator, c * b.j, s * b.y):
        raise DegenerateMatchingError(
            "Gamma^(1) is 0/0: the complex component of R vanishes at r=a "
            "(hard-sphere parameters)",
            ell=mode.ell,
        )
    g0 = gamma0(mode, k, a)
    magnitude = tan_theta * (g0 * b.y - k * b.y_prime) / denominator
    return magnitude * cmath.exp(1j * (mode.xi + math.pi / 2))


def matching_constant(mode: ModeParams, k: float, a: float) -> MatchingConstant:
    return MatchingConstant(
        ell=mode.ell, k=k, a=a, gamma0=gamma0(mode, k, a), gamma1=gamma1(mode, k, a)
    )


def complex_log_derivative(mode: ModeParams, k: float, a: float) -> float:
    """k (cos d j' - sin d y') / (cos d j - sin d y), the complex-QM matching constant."""
    b = bessel_values(mode.ell, _argument(k, a, mode.ell))
    s, c = math.sin(mode.delta), math.cos(mode.delta)
    denominator = c * b.j - s * b.y
    if _is_singular(denominator, c * b.j, s * b.y):
        raise SingularMatchingError("radial wave vanishes at r=a", ell=mode.ell)
    return k * (c * b.j_prime - s * b.y_prime) / denominator


def delta_from_gamma(gamma0: float, gamma1_mag: float, k: float, a: float, ell: int) -> float:
    """Phase shift recovered from a matching constant.

    tan(delta) = [|G1|^2 y j - (G0 j - k j')(G0 y - k y')] / [|G1|^2 y^2 - (G0 y - k y')^2]

    which reduces to the complex relation (G0 j - k j')/(G0 y - k y') when |G1| = 0.
    """
    b = bessel_values(ell, _argument(k, a, ell))
    g2 = gamma1_mag * gamma1_mag
    p = gamma0 * b.j - k * b.j_prime
    q = gamma0 * b.y - k * b.y_prime

    numerator = g2 * b.y * b.j - p * q
    first = g2 * b.y * b.y
    second = q * q
    denominator = first - second
    if _is_singular(denominator, first, max(abs(gamma0 * b.y), abs(k * b.y_prime)) ** 2):
        raise SingularMatchingError("phase-shift inversion is singular", ell=ell)
    return math.atan(numerator / denominator)


# ---------------------------------------------------------------------------
# Numerical oracle
# ---------------------------------------------------------------------------


def log_derivative_numeric(
    mode: ModeParams,
    k: float,
    a: float,
    convention: Convention = "left",
    *,
    step: Optional[float] = None,
    prefactor: Optional[Quaternion] = None,
) -> Quaternion:
    """Central-difference (1/R)(dR/dr) at r = a.

    ``prefactor`` left-multiplies R_ell by a constant quaternion; the left
    convention is blind to it.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    h = DEFAULT_RELATIVE_STEP * a if step is None else step
    if not a > h > 0.0:
        raise NumericDomainError(f"matching radius {a!r} must exceed the step {h!r}")

    def wave(r: float) -> Quaternion:
        value = radial_wave(mode, k, r)
        return value if prefactor is None else multiply(prefactor, value)

    value = wave(a)
    if value.norm() < UNMATCHABLE_NORM:
        raise UnmatchableError(f"|R(a)| = {value.norm():.3g} is too small", ell=mode.ell)

    derivative = (wave(a + h) - wave(a - h)) / (2.0 * h)
    if convention == "left":
        return multiply(inverse(value), derivative)
    return multiply(derivative, inverse(value))


def matching_residual_report(mode: ModeParams, k: float, a: float) -> MatchingResidualReport:
    """Analytic constants against the numerical log-derivative, both conventions."""
    notes = []

    g0: Optional[float]
    try:
        g0 = gamma0(mode, k, a)
    except SingularMatchingError as exc:
        g0 = None
        notes.append(f"gamma0 singular: {exc}")

    g1: Optional[complex]
    try:
        g1 = gamma1(mode, k, a)
    except DegenerateMatchingError as exc:
        g1 = None
        notes.append(f"gamma1 degenerate: {exc}")
    except SingularMatchingError:
        g1 = None

    residuals = []
    for convention in CONVENTIONS:
        numeric = log_derivative_numeric(mode, k, a, convention)
        residuals.append(
            ConventionResidual(
                convention=convention,
                numeric=numeric,
                gamma0_residual=None if g0 is None else abs(g0 - numeric.real),
                gamma1_residual=None if g1 is None else abs(g1 - numeric.z1),
            )
        )

    logger.debug(
        "Matching residuals ell=%d ka=%.6g: %s",
        mode.ell,
        k * a,
        [(r.convention, r.gamma0_residual, r.gamma1_residual) for r in residuals],
    )
    return MatchingResidualReport(
        ell=mode.ell,
        k=k,
        a=a,
        gamma0=g0,
        gamma1=g1,
        residuals=tuple(residuals),
        notes=tuple(notes),
    )
