from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from .config import settings
from .csvio import (
    CrossSectionRow,
    HardSphereRow,
    amplitude_csv,
    consistency_csv,
    cross_section_csv,
    hard_sphere_csv,
    matching_csv,
)
from .errors import InputError, SweepFormatError
from .hard_sphere import (
    HardSphereConfig,
    build_model,
    correction_coefficient,
    low_energy_cross_section,
    low_energy_phase_shift,
    low_energy_polarization_angle,
    saturated_modes,
    total_cross_section_high_energy,
)
from .matching import matching_residual_report
from .optical import RECOMMENDED_KR, build_consistency_report, check_radii
from .partial_waves import (
    ScatteringModel,
    check_truncation,
    complex_limit_cross_section,
    quadrature_cross_section,
    sample_amplitudes,
    total_cross_section,
)
from .specfile import ModelSpecFile
from .special import rule_for_degree

logger = logging.getLogger(__name__)

DEFAULT_THETA_POINTS = 181
DEFAULT_OPTICAL_KR = (RECOMMENDED_KR, 2 * RECOMMENDED_KR, 4 * RECOMMENDED_KR, 8 * RECOMMENDED_KR)


# ---------------------------------------------------------------------------
# Request and registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CommandRequest:
    """Everything a command needs; flags left as None fall back to the model file."""

    spec: Optional[ModelSpecFile] = None
    k: Optional[float] = None
    radius: Optional[float] = None
    lmax: Optional[int] = None
    xi: Optional[float] = None
    clamp: bool = False
    theta_points: int = DEFAULT_THETA_POINTS
    sweep: Optional[Tuple[float, float, int]] = None
    match_radius: Optional[float] = None
    radii: Optional[Tuple[float, ...]] = None
    degrees: bool = False
    workers: int = field(default_factory=lambda: settings.workers)
    parameters: Mapping[str, object] = field(default_factory=dict)


Handler = Callable[[CommandRequest], str]


@dataclass(frozen=True)
class Command:
    name: str
    description: str
    handler: Handler


class CommandTree:
    """Name -> command table filled by the ``command`` decorator."""

    def __init__(self) -> None:
        self._commands: Dict[str, Command] = {}

    def command(self, *, name: str, description: str) -> Callable[[Handler], Handler]:
        def register(handler: Handler) -> Handler:
            if name in self._commands:
                raise ValueError(f"command {name!r} registered twice")
            self._commands[name] = Command(name=name, description=description, handler=handler)
            return handler

        return register

    def get(self, name: str) -> Command:
        try:
            return self._commands[name]
        except KeyError:
            raise InputError(f"unknown command {name!r}") from None

    def __iter__(self) -> Iterator[Command]:
        return iter(self._commands.values())

    def __len__(self) -> int:
        return len(self._commands)


tree = CommandTree()


def run_command(name: str, request: CommandRequest) -> str:
    command = tree.get(name)
    logger.info("Running %s", name)
    output = command.handler(request)
    logger.info("Finished %s", name)
    return output


# ---------------------------------------------------------------------------
# Model resolution
# ---------------------------------------------------------------------------


def parse_sweep(text: str) -> Tuple[float, float, int]:
    """``START:STOP:N`` with N >= 1 evenly spaced points, both ends included."""
    parts = text.split(":")
    if len(parts) != 3:
        raise SweepFormatError(f"sweep must look like START:STOP:N, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise SweepFormatError(f"sweep must look like START:STOP:N, got {text!r}") from None
    if count < 1:
        raise SweepFormatError(f"sweep needs at least one point, got N={count}")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise SweepFormatError("sweep bounds must be finite")
    return start, stop, count


def sweep_values(sweep: Tuple[float, float, int]) -> List[float]:
    start, stop, count = sweep
    return [float(v) for v in np.linspace(start, stop, count)]


def _is_hard_sphere(request: CommandRequest) -> bool:
    if request.spec is not None:
        return request.spec.hard_sphere is not None
    return request.radius is not None


def _wave_number(request: CommandRequest) -> float:
    if request.k is not None:
        return request.k
    if request.spec is not None:
        return request.spec.k
    raise InputError("no wave number: pass --k or a model file with 'k = ...'")


def hard_sphere_config(request: CommandRequest, k: Optional[float] = None) -> HardSphereConfig:
    """Rigid-sphere parameters; command-line flags override the model file."""
    base = request.spec.hard_sphere if request.spec is not None else None
    radius = request.radius if request.radius is not None else (base.R if base else None)
    if radius is None:
        raise InputError("hard sphere needs a radius: pass --radius or a [hard_sphere] file")
    ell_max = request.lmax if request.lmax is not None else (base.ell_max if base else None)
    xi = request.xi if request.xi is not None else (base.xi if base else 0.0)
    return HardSphereConfig(
        R=radius,
        k=_wave_number(request) if k is None else k,
        ell_max=ell_max,
        xi_policy=xi,
        clamp=request.clamp or (base.clamp if base else False),
    )


def resolve_model(request: CommandRequest, k: Optional[float] = None) -> ScatteringModel:
    if _is_hard_sphere(request):
        return build_model(hard_sphere_config(request, k))
    if request.spec is None:
        raise InputError("pass --spec FILE, or --k with --radius for a hard sphere")
    modes = request.spec.modes or ()
    if request.lmax is not None:
        modes = tuple(m for m in modes if m.ell <= request.lmax)
    return ScatteringModel(_wave_number(request) if k is None else k, modes)


def _theta_grid(points: int) -> np.ndarray:
    if points < 2:
        raise InputError(f"--theta-points must be at least 2, got {points}")
    return np.linspace(0.0, math.pi, points)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


@tree.command(
    name="amplitude",
    description="Tabulate F(theta) and sigma(theta) on an even grid over [0, pi].",
)
def cmd_amplitude(request: CommandRequest) -> str:
    thetas = _theta_grid(request.theta_points)
    model = resolve_model(request)
    check_truncation(model)
    samples = sample_amplitudes(model, thetas)
    logger.debug("Sampled %d angles for %d modes", len(samples), len(model.modes))
    return amplitude_csv(samples, request.parameters, degrees=request.degrees)


def cross_section_row(model: ScatteringModel) -> CrossSectionRow:
    sigma_closed = total_cross_section(model)
    sigma_complex = complex_limit_cross_section(model)
    return CrossSectionRow(
        k=model.k,
        sigma_closed=sigma_closed,
        sigma_quadrature=quadrature_cross_section(model, rule_for_degree(model.ell_max)),
        sigma_complex_limit=sigma_complex,
        ratio=sigma_closed / sigma_complex if sigma_complex > 0.0 else math.nan,
    )


@tree.command(
    name="cross-section",
    description="Total cross sections, optionally swept over kR (hard sphere) or k (mode table).",
)
def cmd_cross_section(request: CommandRequest) -> str:
    if request.sweep is None:
        model = resolve_model(request)
        check_truncation(model)
        return cross_section_csv([cross_section_row(model)], request.parameters)

    points = sweep_values(request.sweep)
    if _is_hard_sphere(request):
        radius = hard_sphere_config(request, k=1.0).R
        wave_numbers = [kR / radius for kR in points]
    else:
        wave_numbers = points

    def evaluate(k: float) -> CrossSectionRow:
        return cross_section_row(resolve_model(request, k))

    # map() yields in input order, so rows stay aligned with the grid
    with ThreadPoolExecutor(max_workers=request.workers) as pool:
        rows = list(pool.map(evaluate, wave_numbers))
    logger.info("Swept %d points with %d workers", len(rows), request.workers)
    return cross_section_csv(rows, request.parameters)


@tree.command(
    name="hard-sphere",
    description="Per-mode phase shifts and polarization angles of a rigid sphere.",
)
def cmd_hard_sphere(request: CommandRequest) -> str:
    config = hard_sphere_config(request)
    saturated = set(saturated_modes(config))
    model = build_model(config)

    rows = []
    for mode in model.modes:
        rows.append(
            HardSphereRow(
                ell=mode.ell,
                kR=config.kR,
                delta=mode.delta,
                theta_pol=mode.theta_pol,
                delta_low_energy=low_energy_phase_shift(mode.ell, config.kR),
                theta_pol_low_energy=low_energy_polarization_angle(mode.ell, config.kR),
                saturated=mode.ell in saturated,
            )
        )

    summary = {
        "sigma_closed": total_cross_section(model),
        "sigma_high_energy": total_cross_section_high_energy(config),
        "sigma_complex_limit": complex_limit_cross_section(model),
        "sigma_low_energy_estimate": low_energy_cross_section(config),
        "correction_coefficient": correction_coefficient(config),
    }
    return hard_sphere_csv(rows, request.parameters, summary, degrees=request.degrees)


@tree.command(
    name="match",
    description="Analytic matching constants against the numerical log-derivative.",
)
def cmd_match(request: CommandRequest) -> str:
    model = resolve_model(request)
    radius = request.match_radius
    if radius is None and _is_hard_sphere(request):
        radius = hard_sphere_config(request).R
    if radius is None:
        raise InputError("match needs --match-radius for a mode table")
    if not radius > 0.0:
        raise InputError(f"matching radius must be positive, got {radius!r}")
    reports = [matching_residual_report(mode, model.k, radius) for mode in model.modes]
    return matching_csv(reports, request.parameters)


@tree.command(
    name="optical",
    description="Closed-form, quadrature and Im[iF] cross sections plus flux residuals.",
)
def cmd_optical(request: CommandRequest) -> str:
    if request.radii is not None:
        check_radii(request.radii)
    model = resolve_model(request)
    check_truncation(model)
    radii = request.radii or tuple(kr / model.k for kr in DEFAULT_OPTICAL_KR)
    report = build_consistency_report(model, radii)
    return consistency_csv(report, request.parameters)
