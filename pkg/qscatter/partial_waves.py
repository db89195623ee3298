"""Quaternionic partial-wave expansion.

Each channel ell carries a unit quaternion

    Lambda_ell = cos(Theta) e^{i delta} + sin(Theta) e^{i xi} j

and contributes ``(2 ell + 1)/(2k) Lambda i (1 - Lambda^2) P_ell(cos theta)`` to the
scattering amplitude F(theta). Units are hbar = m = 1; k is the only scale.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import NumericDomainError
from .quaternion import ONE, UNIT_I, Quaternion, complex_phase, conjugate, multiply
from .special import (
    QuadratureRule,
    default_rule,
    legendre_table,
    sph_bessel_j,
    sph_bessel_y,
)

logger = logging.getLogger(__name__)

# Relative share of sigma above which the last mode means the list is truncated too early
TRUNCATION_TOLERANCE = 1e-6

I_POWERS = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModeParams:
    ell: int
    delta: float
    theta_pol: float
    xi: float = 0.0

    def __post_init__(self) -> None:
        if self.ell < 0:
            raise ValueError(f"ell must be non-negative, got {self.ell}")
        if abs(self.theta_pol) > math.pi / 2:
            raise ValueError(
                f"theta_pol={self.theta_pol!r} outside [-pi/2, pi/2] for ell={self.ell}; "
                "use ModeParams.canonical()"
            )

    @classmethod
    def canonical(cls, ell: int, delta: float, theta_pol: float, xi: float = 0.0) -> "ModeParams":
        """Build a mode with any Theta, folding it into [-pi/2, pi/2].

        cos(Theta) is kept non-negative by moving a sign into delta; Lambda is unchanged.
        """
        theta = math.remainder(theta_pol, 2 * math.pi)
        if theta > math.pi / 2:
            theta = math.pi - theta
            delta += math.pi
        elif theta < -math.pi / 2:
            theta = -math.pi - theta
            delta += math.pi
        return cls(ell, math.remainder(delta, 2 * math.pi), theta, xi)


@dataclass(frozen=True)
class ScatteringModel:
    k: float
    modes: Tuple[ModeParams, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not self.k > 0.0:
            raise ValueError(f"wave number must be positive, got {self.k!r}")
        modes = tuple(sorted(self.modes, key=lambda m: m.ell))
        ells = [m.ell for m in modes]
        if len(set(ells)) != len(ells):
            raise ValueError(f"duplicate ell values in model: {ells}")
        object.__setattr__(self, "modes", modes)

    @property
    def ell_max(self) -> int:
        return self.modes[-1].ell if self.modes else 0

    def mode(self, ell: int) -> ModeParams:
        """Mode for ``ell``; absent channels do not scatter."""
        for m in self.modes:
            if m.ell == ell:
                return m
        return ModeParams(ell, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class AmplitudeSample:
    theta: float
    F: Quaternion
    sigma_diff: float


@dataclass(frozen=True)
class ConventionRow:
    """Differential cross sections of one angle under both amplitude conventions."""

    theta: float
    sigma_quaternionic: float
    sigma_textbook: float


# ---------------------------------------------------------------------------
# Model helpers
# ---------------------------------------------------------------------------


def plane_wave_model(k: float, ell_max: int) -> ScatteringModel:
    """No scattering in any channel up to ``ell_max`` (all Lambda = 1)."""
    return ScatteringModel(k, tuple(ModeParams(ell, 0.0, 0.0) for ell in range(ell_max + 1)))


def complex_limit(model: ScatteringModel) -> ScatteringModel:
    return replace(model, modes=tuple(replace(m, theta_pol=0.0) for m in model.modes))


# ---------------------------------------------------------------------------
# Coefficients
# ---------------------------------------------------------------------------


def lambda_coeff(mode: ModeParams) -> Quaternion:
    return Quaternion(
        math.cos(mode.theta_pol) * cmath.exp(1j * mode.delta),
        math.sin(mode.theta_pol) * cmath.exp(1j * mode.xi),
    )


def a_coeff(mode: ModeParams) -> Quaternion:
    """A_ell = -Lambda i Lambda."""
    lam = lambda_coeff(mode)
    return -multiply(multiply(lam, UNIT_I), lam)


def partial_amplitude(mode: ModeParams) -> Quaternion:
    """Lambda i (1 - Lambda^2), the channel weight of F without (2 ell + 1)/(2k)."""
    lam = lambda_coeff(mode)
    return multiply(multiply(lam, UNIT_I), ONE - multiply(lam, lam))


# ---------------------------------------------------------------------------
# Amplitude and cross sections
# ---------------------------------------------------------------------------


def _check_angle(theta: float) -> None:
    if not 0.0 <= theta <= math.pi:
        raise NumericDomainError(f"scattering angle must lie in [0, pi], got {theta!r}")


def amplitude_grid(
    model: ScatteringModel, thetas: Sequence[float]
) -> Tuple[np.ndarray, np.ndarray]:
    """F(theta) on a grid, as the symplectic component arrays (z0, z1)."""
    thetas = np.asarray(thetas, dtype=float)
    if np.any(thetas < 0.0) or np.any(thetas > math.pi):
        raise NumericDomainError("scattering angles must lie in [0, pi]")
    return _amplitude_on_cosines(model, np.clip(np.cos(thetas), -1.0, 1.0))


def _amplitude_on_cosines(
    model: ScatteringModel, mu: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    z0 = np.zeros(mu.shape, dtype=complex)
    z1 = np.zeros(mu.shape, dtype=complex)
    if not model.modes:
        return z0, z1
    table = legendre_table(model.ell_max, mu)
    for mode in model.modes:
        weight = partial_amplitude(mode)
        scale = (2 * mode.ell + 1) / (2.0 * model.k)
        z0 += scale * weight.z0 * table[mode.ell]
        z1 += scale * weight.z1 * table[mode.ell]
    return z0, z1


def amplitude(model: ScatteringModel, theta: float) -> Quaternion:
    _check_angle(theta)
    z0, z1 = _amplitude_on_cosines(model, np.array([math.cos(theta)]))
    return Quaternion(complex(z0[0]), complex(z1[0]))


def differential_cross_section(model: ScatteringModel, theta: float) -> float:
    return amplitude(model, theta).norm_squared()


def sample_amplitudes(model: ScatteringModel, thetas: Iterable[float]) -> List[AmplitudeSample]:
    thetas = [float(t) for t in thetas]
    z0, z1 = amplitude_grid(model, thetas)
    samples = []
    for theta, a, b in zip(thetas, z0, z1):
        F = Quaternion(complex(a), complex(b))
        samples.append(AmplitudeSample(theta=theta, F=F, sigma_diff=F.norm_squared()))
    return samples


def mode_contributions(model: ScatteringModel) -> List[Tuple[int, float]]:
    """Per-channel terms of the closed-form total cross section."""
    prefactor = 4.0 * math.pi / model.k**2
    out = []
    for m in model.modes:
        s_delta = math.sin(m.delta)
        c_theta = math.cos(m.theta_pol)
        s_theta = math.sin(m.theta_pol)
        term = s_delta * s_delta * c_theta * c_theta + s_theta * s_theta
        out.append((m.ell, prefactor * (2 * m.ell + 1) * term))
    return out


def total_cross_section(model: ScatteringModel) -> float:
    return math.fsum(c for _, c in mode_contributions(model))


def quadrature_cross_section(
    model: ScatteringModel, rule: Optional[QuadratureRule] = None
) -> float:
    """Integral of |F|^2 over the sphere, 2 pi times Gauss-Legendre in cos(theta)."""
    rule = rule or default_rule()
    if model.modes and rule.order <= model.ell_max:
        logger.warning(
            "Quadrature order %d cannot integrate |F|^2 exactly for ell_max=%d",
            rule.order,
            model.ell_max,
        )
    z0, z1 = _amplitude_on_cosines(model, rule.nodes)
    return 2.0 * math.pi * rule.integrate(np.abs(z0) ** 2 + np.abs(z1) ** 2)


def complex_limit_cross_section(model: ScatteringModel) -> float:
    """(4 pi/k^2) sum (2 ell + 1) sin^2(delta)."""
    return total_cross_section(complex_limit(model))


def quaternionic_excess(model: ScatteringModel) -> float:
    return total_cross_section(model) - complex_limit_cross_section(model)


def check_truncation(model: ScatteringModel) -> bool:
    """Warn when the last mode still carries a noticeable share of sigma.

    Returns True when the truncation looks adequate.
    """
    contributions = mode_contributions(model)
    if not contributions:
        return True
    sigma = math.fsum(c for _, c in contributions)
    last_ell, last = contributions[-1]
    if sigma > 0.0 and last > TRUNCATION_TOLERANCE * sigma:
        logger.warning(
            "Mode ell=%d contributes %.3g of sigma; the mode list may be truncated too early",
            last_ell,
            last / sigma,
        )
        return False
    return True


# ---------------------------------------------------------------------------
# Radial and asymptotic waves
# ---------------------------------------------------------------------------


def _check_radius(r: float, ell: int | None = None) -> None:
    if not r > 0.0:
        raise NumericDomainError(f"radius must be positive, got {r!r}", ell=ell)


def radial_bracket(mode: ModeParams, k: float, r: float) -> Quaternion:
    """The bracket of R_ell, i.e. A_ell^{-1} R_ell:

    i cos(Theta)(cos(delta) j_ell - sin(delta) y_ell) - sin(Theta) e^{i xi} y_ell j
    """
    _check_radius(r, mode.ell)
    x = k * r
    j_val = sph_bessel_j(mode.ell, x)
    y_val = sph_bessel_y(mode.ell, x)
    complex_part = 1j * math.cos(mode.theta_pol) * (
        math.cos(mode.delta) * j_val - math.sin(mode.delta) * y_val
    )
    quaternionic_part = -math.sin(mode.theta_pol) * cmath.exp(1j * mode.xi) * y_val
    return Quaternion(complex_part, quaternionic_part)


def radial_wave(mode: ModeParams, k: float, r: float) -> Quaternion:
    return multiply(a_coeff(mode), radial_bracket(mode, k, r))


def asymptotic_mode(mode: ModeParams, k: float, r: float) -> Quaternion:
    """[Lambda e^{i phi} - conj(Lambda) e^{-i phi}] / (2kr), phi = kr - ell pi/2."""
    _check_radius(r, mode.ell)
    lam = lambda_coeff(mode)
    phase = k * r - mode.ell * math.pi / 2
    outgoing = multiply(lam, complex_phase(phase))
    incoming = multiply(conjugate(lam), complex_phase(-phase))
    return (outgoing - incoming) / (2.0 * k * r)


def incident_wave(model: ScatteringModel, r: float, theta: float) -> Quaternion:
    """(1/kr) sum Lambda_ell (2 ell + 1) i^ell sin(kr - ell pi/2) P_ell(cos theta)."""
    _check_radius(r)
    _check_angle(theta)
    total = Quaternion()
    if not model.modes:
        return total
    kr = model.k * r
    legendre = legendre_table(model.ell_max, np.array([math.cos(theta)]))[:, 0]
    for mode in model.modes:
        radial = (2 * mode.ell + 1) * math.sin(kr - mode.ell * math.pi / 2) / kr
        weight = I_POWERS[mode.ell % 4] * radial * float(legendre[mode.ell])
        total = total + multiply(lambda_coeff(mode), Quaternion(weight, 0j))
    return total


# ---------------------------------------------------------------------------
# Amplitude convention comparison
# ---------------------------------------------------------------------------


def textbook_amplitude(model: ScatteringModel, theta: float) -> complex:
    """Complex-QM amplitude (1/k) sum (2 ell + 1) e^{i delta} sin(delta) P_ell(cos theta).

    Polarization angles are ignored; this is the reference the quaternionic F is
    compared against in the complex limit.
    """
    _check_angle(theta)
    if not model.modes:
        return 0j
    legendre = legendre_table(model.ell_max, np.array([math.cos(theta)]))[:, 0]
    total = 0j
    for m in model.modes:
        total += (
            (2 * m.ell + 1)
            * cmath.exp(1j * m.delta)
            * math.sin(m.delta)
            * float(legendre[m.ell])
        )
    return total / model.k


def convention_comparison(
    model: ScatteringModel, thetas: Iterable[float]
) -> List[ConventionRow]:
    """sigma(theta) from the Lambda i (1 - Lambda^2) form of F and from the textbook amplitude.

    Total cross sections agree; multi-mode interference terms differ because the
    quaternionic form carries e^{2 i delta} where the textbook carries e^{i delta}.
    """
    rows = []
    for theta in thetas:
        rows.append(
            ConventionRow(
                theta=float(theta),
                sigma_quaternionic=differential_cross_section(model, theta),
                sigma_textbook=abs(textbook_amplitude(model, theta)) ** 2,
            )
        )
    return rows
