"""Probability current, flux through a large sphere and the Im[iF] cross section.

These are consistency experiments: the only identity asserted is closed-form sigma
against the quadrature of |F|^2. Everything else is reported.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import InputError, NumericDomainError
from .partial_waves import (
    I_POWERS,
    ScatteringModel,
    amplitude,
    incident_wave,
    lambda_coeff,
    quadrature_cross_section,
    total_cross_section,
)
from .quaternion import UNIT_I, Quaternion, conjugate, im_i, multiply
from .special import QuadratureRule, default_rule, legendre_p, legendre_table, rule_for_degree

logger = logging.getLogger(__name__)

REALITY_TOLERANCE = 1e-12
IDENTITY_TOLERANCE = 1e-10
RECOMMENDED_KR = 50.0
FLUX_NOISE_FLOOR = 1e-10
MIN_RADII = 4

NOTE_DIMENSIONS = (
    "sigma_optical = 2 pi int Im_i[iF] sin(theta) dtheta taken literally; it carries "
    "dimensions of length, not length^2, and is not expected to equal sigma_closed"
)
NOTE_LEGENDRE = (
    "int_0^pi P_l(cos theta) sin(theta) dtheta uses the exact value 2 delta_l0; the "
    "delta_l0 shorthand omits the factor 2"
)
NOTE_CONJUGATION = "c.c. terms of the flux expansion use full quaternionic conjugation"


@dataclass(frozen=True)
class ConsistencyReport:
    sigma_closed: float
    sigma_quadrature: float
    sigma_optical: float
    flux_residuals: Tuple[Tuple[float, float], ...]
    notes: Tuple[str, ...] = field(default_factory=tuple)


# ---------------------------------------------------------------------------
# Probability current
# ---------------------------------------------------------------------------


def _symmetrized_current(psi: Quaternion, grad: Quaternion) -> Quaternion:
    """(1/2)[conj(psi) Pi psi + conj(Pi psi) psi] with Pi psi = -grad i (hbar = m = 1)."""
    momentum = -multiply(grad, UNIT_I)
    return (multiply(conjugate(psi), momentum) + multiply(conjugate(momentum), psi)) / 2.0


def probability_current(
    psi: Quaternion, grad_psi: Sequence[Quaternion]
) -> Tuple[float, float, float]:
    if len(grad_psi) != 3:
        raise ValueError("gradient must have three components")
    out = []
    for grad in grad_psi:
        value = _symmetrized_current(psi, grad)
        _, x1, x2, x3 = value.components
        scale = max(1.0, psi.norm() * grad.norm())
        residue = max(abs(x1), abs(x2), abs(x3))
        if residue > REALITY_TOLERANCE * scale:
            raise NumericDomainError(f"current density is not real (residue {residue:.3g})")
        out.append(value.real)
    return (out[0], out[1], out[2])


# ---------------------------------------------------------------------------
# Asymptotic wave on a sphere of radius r
# ---------------------------------------------------------------------------


def incident_wave_radial_derivative(model: ScatteringModel, r: float, theta: float) -> Quaternion:
    """d/dr of the incident partial sum, term by term."""
    if not r > 0.0:
        raise NumericDomainError(f"radius must be positive, got {r!r}")
    total = Quaternion()
    if not model.modes:
        return total
    k = model.k
    legendre = legendre_table(model.ell_max, np.array([math.cos(theta)]))[:, 0]
    for mode in model.modes:
        phase = k * r - mode.ell * math.pi / 2
        radial = (2 * mode.ell + 1) * (math.cos(phase) / r - math.sin(phase) / (k * r * r))
        weight = I_POWERS[mode.ell % 4] * radial * float(legendre[mode.ell])
        total = total + multiply(lambda_coeff(mode), Quaternion(weight, 0j))
    return total


def scattered_wave(model: ScatteringModel, r: float, theta: float) -> Quaternion:
    """F(theta) e^{ikr} / r."""
    return multiply(amplitude(model, theta), Quaternion(cmath.exp(1j * model.k * r) / r, 0j))


def scattered_wave_radial_derivative(
    model: ScatteringModel, r: float, theta: float
) -> Quaternion:
    k = model.k
    factor = (1j * k / r - 1.0 / (r * r)) * cmath.exp(1j * k * r)
    return multiply(amplitude(model, theta), Quaternion(factor, 0j))


def radial_current(model: ScatteringModel, r: float, theta: float) -> float:
    """J . r_hat for u = I + F e^{ikr}/r."""
    psi = incident_wave(model, r, theta) + scattered_wave(model, r, theta)
    d_psi = incident_wave_radial_derivative(model, r, theta) + scattered_wave_radial_derivative(
        model, r, theta
    )
    return probability_current(psi, (d_psi, Quaternion(), Quaternion()))[0]


def flux_integral(
    model: ScatteringModel, r: float, rule: Optional[QuadratureRule] = None
) -> float:
    """Net probability flux through the sphere of radius r."""
    rule = rule or default_rule()
    if model.k * r < RECOMMENDED_KR:
        logger.warning(
            "kr=%.3g is below %.0f; the asymptotic wave may not be meaningful here",
            model.k * r,
            RECOMMENDED_KR,
        )
    thetas = np.arccos(np.clip(rule.nodes, -1.0, 1.0))
    currents = np.array([radial_current(model, r, float(t)) for t in thetas])
    return 2.0 * math.pi * r * r * rule.integrate(currents)


# ---------------------------------------------------------------------------
# Angular integrals and the optical relation
# ---------------------------------------------------------------------------


def legendre_sin_integral(ell: int, rule: Optional[QuadratureRule] = None) -> float:
    """int_0^pi P_ell(cos theta) sin(theta) dtheta, i.e. int_{-1}^{1} P_ell(mu) dmu."""
    if ell < 0:
        raise NumericDomainError(f"order must be non-negative, got {ell}")
    rule = rule or default_rule()
    values = np.array([legendre_p(ell, float(mu)) for mu in rule.nodes])
    return rule.integrate(values)


def optical_cross_section(model: ScatteringModel, rule: Optional[QuadratureRule] = None) -> float:
    """2 pi int_0^pi Im_i[i F(theta)] sin(theta) dtheta."""
    rule = rule or default_rule()
    thetas = np.arccos(np.clip(rule.nodes, -1.0, 1.0))
    values = np.array(
        [im_i(multiply(UNIT_I, amplitude(model, float(t)))) for t in thetas]
    )
    return 2.0 * math.pi * rule.integrate(values)


def check_radii(radii: Sequence[float]) -> Tuple[float, ...]:
    """At least MIN_RADII positive, strictly increasing radii."""
    radii = tuple(float(r) for r in radii)
    if len(radii) < MIN_RADII:
        raise InputError(f"flux check needs at least {MIN_RADII} radii, got {len(radii)}")
    if any(not r > 0.0 for r in radii):
        raise InputError("radii must be positive")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise InputError("radii must be strictly increasing")
    return radii


def build_consistency_report(
    model: ScatteringModel,
    radii: Sequence[float],
    rule: Optional[QuadratureRule] = None,
) -> ConsistencyReport:
    radii = check_radii(radii)

    rule = rule or rule_for_degree(model.ell_max)

    sigma_closed = total_cross_section(model)
    sigma_quadrature = quadrature_cross_section(model, rule)
    scale = max(abs(sigma_closed), abs(sigma_quadrature))
    if abs(sigma_closed - sigma_quadrature) > IDENTITY_TOLERANCE * scale:
        raise NumericDomainError(
            f"closed-form sigma {sigma_closed!r} and quadrature {sigma_quadrature!r} disagree"
        )

    sigma_optical = optical_cross_section(model, rule)
    flux = tuple((r, flux_integral(model, r, rule)) for r in radii)

    notes = [NOTE_DIMENSIONS, NOTE_LEGENDRE, NOTE_CONJUGATION]
    if len(flux) > 1 and abs(flux[-1][1]) >= abs(flux[0][1]) > FLUX_NOISE_FLOOR:
        notes.append("flux residual does not decay with r")
        logger.warning(
            "Flux residual does not decay: %.3g at r=%.3g vs %.3g at r=%.3g",
            flux[-1][1],
            flux[-1][0],
            flux[0][1],
            flux[0][0],
        )

    return ConsistencyReport(
        sigma_closed=sigma_closed,
        sigma_quadrature=sigma_quadrature,
        sigma_optical=sigma_optical,
        flux_residuals=flux,
        notes=tuple(notes),
    )
