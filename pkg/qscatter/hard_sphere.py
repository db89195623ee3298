"""Rigid sphere of radius R.

Only the complex component of the radial bracket vanishes at r = R, which gives the
usual phase shifts tan(delta) = j/y, while the quaternionic component stays finite with
sin(Theta) = 1/y. Where |y_ell(kR)| < 1 no real Theta exists; such modes are
"saturated" and either rejected or clamped to Theta = +-pi/2.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

from .errors import NumericDomainError, SaturatedPolarizationError
from .partial_waves import ModeParams, ScatteringModel, complex_limit, total_cross_section
from .special import double_factorial, sph_bessel_j, sph_bessel_y

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HardSphereConfig:
    R: float
    k: float
    ell_max: Optional[int] = None
    xi_policy: float = 0.0
    clamp: bool = False

    def __post_init__(self) -> None:
        if not self.R > 0.0:
            raise ValueError(f"sphere radius must be positive, got {self.R!r}")
        if not self.k > 0.0:
            raise ValueError(f"wave number must be positive, got {self.k!r}")
        if not math.isfinite(self.k * self.R):
            raise ValueError(f"kR must be finite, got k={self.k!r}, R={self.R!r}")
        if self.ell_max is None:
            object.__setattr__(self, "ell_max", default_ell_max(self.k * self.R))
        elif self.ell_max < 0:
            raise ValueError(f"ell_max must be non-negative, got {self.ell_max}")

    @property
    def kR(self) -> float:
        return self.k * self.R


def default_ell_max(kR: float) -> int:
    return math.ceil(kR) + 8


def _check_kR(kR: float, ell: int) -> None:
    if not kR > 0.0:
        raise NumericDomainError(f"kR must be positive, got {kR!r}", ell=ell)


# ---------------------------------------------------------------------------
# Exact angles
# ---------------------------------------------------------------------------


def phase_shift(ell: int, kR: float) -> float:
    """delta_ell = atan(j_ell(kR)/y_ell(kR)) in (-pi/2, pi/2]."""
    _check_kR(kR, ell)
    j_val = sph_bessel_j(ell, kR)
    y_val = sph_bessel_y(ell, kR)
    if y_val == 0.0:
        return math.pi / 2
    return math.atan(j_val / y_val)


def polarization_angle(ell: int, kR: float) -> float:
    """Theta_ell = asin(1/y_ell(kR)); needs |y_ell(kR)| >= 1."""
    _check_kR(kR, ell)
    y_val = sph_bessel_y(ell, kR)
    if abs(y_val) < 1.0:
        raise SaturatedPolarizationError(ell, kR, y_val)
    return math.asin(1.0 / y_val)


def saturated_modes(config: HardSphereConfig) -> List[int]:
    """Channels where sin(Theta) = 1/y has no real solution."""
    return [
        ell for ell in range(config.ell_max + 1) if abs(sph_bessel_y(ell, config.kR)) < 1.0
    ]


def build_model(config: HardSphereConfig) -> ScatteringModel:
    kR = config.kR
    modes = []
    for ell in range(config.ell_max + 1):
        delta = phase_shift(ell, kR)
        try:
            theta = polarization_angle(ell, kR)
        except SaturatedPolarizationError as exc:
            if not config.clamp:
                raise
            theta = math.copysign(math.pi / 2, exc.y_value)
            logger.warning(
                "Mode ell=%d saturated at kR=%.6g (|y|=%.3g); clamping Theta to %+.4f",
                ell,
                kR,
                abs(exc.y_value),
                theta,
            )
        modes.append(ModeParams(ell, delta, theta, config.xi_policy))
    logger.debug("Built hard-sphere model kR=%.6g with %d modes", kR, len(modes))
    return ScatteringModel(config.k, tuple(modes))


def _sin2_theta(ell: int, y_val: float, clamp: bool, kR: float) -> float:
    if abs(y_val) >= 1.0:
        return 1.0 / (y_val * y_val)
    if clamp:
        return 1.0
    raise SaturatedPolarizationError(ell, kR, y_val)


def total_cross_section_high_energy(config: HardSphereConfig) -> float:
    """(4 pi/k^2) sum (2 ell + 1) (j^2 + sin^2(Theta) y^2) / (j^2 + y^2)."""
    kR = config.kR
    terms = []
    for ell in range(config.ell_max + 1):
        j_val = sph_bessel_j(ell, kR)
        y_val = sph_bessel_y(ell, kR)
        sin2 = _sin2_theta(ell, y_val, config.clamp, kR)
        terms.append((2 * ell + 1) * (j_val**2 + sin2 * y_val**2) / (j_val**2 + y_val**2))
    return 4.0 * math.pi / config.k**2 * math.fsum(terms)


# ---------------------------------------------------------------------------
# Low-energy forms
# ---------------------------------------------------------------------------


def low_energy_phase_shift(ell: int, kR: float) -> float:
    """atan of -(kR)^{2 ell + 1} / ((2 ell + 1)!! (2 ell - 1)!!)."""
    _check_kR(kR, ell)
    return math.atan(
        -(kR ** (2 * ell + 1))
        / (double_factorial(2 * ell + 1) * double_factorial(2 * ell - 1))
    )


def low_energy_polarization_angle(ell: int, kR: float) -> float:
    """asin of -(kR)^{ell + 1} / (2 ell - 1)!!."""
    _check_kR(kR, ell)
    return math.asin(max(-1.0, -(kR ** (ell + 1)) / double_factorial(2 * ell - 1)))


def low_energy_cross_section(config: HardSphereConfig) -> float:
    """8 pi R^2 (1 - k^2 R^2 / 2), the usual small-kR estimate."""
    return 8.0 * math.pi * config.R**2 * (1.0 - 0.5 * config.kR**2)


def correction_coefficient(config: HardSphereConfig) -> float:
    """c in sigma = 8 pi R^2 (1 + c (kR)^2), measured from the exact sum."""
    leading = 8.0 * math.pi * config.R**2
    return (total_cross_section(build_model(config)) / leading - 1.0) / config.kR**2


def complex_cross_section(config: HardSphereConfig) -> float:
    """Cross section of the same sphere with every Theta set to zero."""
    return total_cross_section(complex_limit(build_model(config)))
