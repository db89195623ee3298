"""CSV emission and read-back.

Every document starts with a ``#`` reproducibility line (tool version, command and the
sorted parameter set, never a timestamp), may carry further ``#`` comment lines, then
one header row and the data rows. Floats use 17 significant digits so values survive
a write/read cycle unchanged.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import __version__
from .errors import InputError
from .matching import ConventionResidual, MatchingResidualReport
from .optical import ConsistencyReport
from .partial_waves import AmplitudeSample
from .quaternion import Quaternion

logger = logging.getLogger(__name__)

AMPLITUDE_COLUMNS = ("theta", "F_w", "F_x", "F_y", "F_z", "sigma_diff")
CROSS_SECTION_COLUMNS = ("k", "sigma_closed", "sigma_quadrature", "sigma_complex_limit", "ratio")
HARD_SPHERE_COLUMNS = (
    "ell",
    "kR",
    "delta",
    "theta_pol",
    "delta_low_energy",
    "theta_pol_low_energy",
    "saturated",
)
MATCHING_COLUMNS = (
    "ell",
    "k",
    "a",
    "convention",
    "gamma0",
    "gamma1_re",
    "gamma1_im",
    "numeric_w",
    "numeric_x",
    "numeric_y",
    "numeric_z",
    "gamma0_residual",
    "gamma1_residual",
)
CONSISTENCY_COLUMNS = ("quantity", "r", "value")

_NOTE_LINE = re.compile(r"^note ell=(\d+): (.*)$")


@dataclass(frozen=True)
class CrossSectionRow:
    k: float
    sigma_closed: float
    sigma_quadrature: float
    sigma_complex_limit: float
    ratio: float


@dataclass(frozen=True)
class HardSphereRow:
    ell: int
    kR: float
    delta: float
    theta_pol: float
    delta_low_energy: float
    theta_pol_low_energy: float
    saturated: bool


@dataclass(frozen=True)
class CsvDocument:
    """A parsed document: provenance line, extra comments, header and raw rows."""

    provenance: str
    comments: Tuple[str, ...]
    columns: Tuple[str, ...]
    rows: Tuple[Tuple[str, ...], ...] = field(default_factory=tuple)

    def records(self) -> List[Dict[str, str]]:
        return [dict(zip(self.columns, row)) for row in self.rows]


# ---------------------------------------------------------------------------
# Formatting
# ---------------------------------------------------------------------------


def format_float(value: float) -> str:
    return format(float(value), ".17g")


def _cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _parameter(value: object) -> str:
    if value is None:
        return "none"
    if isinstance(value, (list, tuple)):
        return ";".join(_parameter(v) for v in value)
    return _cell(value)


def provenance_line(command: str, parameters: Mapping[str, object]) -> str:
    """``qscatter <version> <command> key=value ...`` with keys sorted."""
    parts = [f"qscatter {__version__}", command]
    parts.extend(f"{key}={_parameter(parameters[key])}" for key in sorted(parameters))
    return " ".join(parts)


def _render(
    command: str,
    parameters: Mapping[str, object],
    columns: Sequence[str],
    rows: Iterable[Sequence[object]],
    comments: Sequence[str] = (),
) -> str:
    buffer = io.StringIO()
    buffer.write(f"# {provenance_line(command, parameters)}\n")
    for comment in comments:
        buffer.write(f"# {comment}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


# ---------------------------------------------------------------------------
# Writers
# ---------------------------------------------------------------------------


def amplitude_csv(
    samples: Sequence[AmplitudeSample],
    parameters: Mapping[str, object],
    *,
    degrees: bool = False,
) -> str:
    rows = []
    for s in samples:
        theta = math.degrees(s.theta) if degrees else s.theta
        w, x, y, z = s.F.components
        rows.append((theta, w, x, y, z, s.sigma_diff))
    return _render("amplitude", parameters, AMPLITUDE_COLUMNS, rows)


def cross_section_csv(rows: Sequence[CrossSectionRow], parameters: Mapping[str, object]) -> str:
    return _render(
        "cross-section",
        parameters,
        CROSS_SECTION_COLUMNS,
        [(r.k, r.sigma_closed, r.sigma_quadrature, r.sigma_complex_limit, r.ratio) for r in rows],
    )


def hard_sphere_csv(
    rows: Sequence[HardSphereRow],
    parameters: Mapping[str, object],
    summary: Mapping[str, float],
    *,
    degrees: bool = False,
) -> str:
    convert = math.degrees if degrees else float
    body = [
        (
            r.ell,
            r.kR,
            convert(r.delta),
            convert(r.theta_pol),
            convert(r.delta_low_energy),
            convert(r.theta_pol_low_energy),
            r.saturated,
        )
        for r in rows
    ]
    comments = [f"{key}={format_float(value)}" for key, value in summary.items()]
    return _render("hard-sphere", parameters, HARD_SPHERE_COLUMNS, body, comments)


def matching_csv(
    reports: Sequence[MatchingResidualReport], parameters: Mapping[str, object]
) -> str:
    comments = [f"note ell={rep.ell}: {note}" for rep in reports for note in rep.notes]
    rows = []
    for rep in reports:
        g1_re = None if rep.gamma1 is None else rep.gamma1.real
        g1_im = None if rep.gamma1 is None else rep.gamma1.imag
        for res in rep.residuals:
            w, x, y, z = res.numeric.components
            rows.append(
                (
                    rep.ell,
                    rep.k,
                    rep.a,
                    res.convention,
                    rep.gamma0,
                    g1_re,
                    g1_im,
                    w,
                    x,
                    y,
                    z,
                    res.gamma0_residual,
                    res.gamma1_residual,
                )
            )
    return _render("match", parameters, MATCHING_COLUMNS, rows, comments)


def consistency_csv(report: ConsistencyReport, parameters: Mapping[str, object]) -> str:
    rows: List[Tuple[object, ...]] = [
        ("sigma_closed", None, report.sigma_closed),
        ("sigma_quadrature", None, report.sigma_quadrature),
        ("sigma_optical", None, report.sigma_optical),
    ]
    rows.extend(("flux_residual", r, value) for r, value in report.flux_residuals)
    rows.extend(("note", None, note) for note in report.notes)
    return _render("optical", parameters, CONSISTENCY_COLUMNS, rows)


# ---------------------------------------------------------------------------
# Readers
# ---------------------------------------------------------------------------


def parse_document(text: str) -> CsvDocument:
    lines = text.splitlines()
    comments = []
    index = 0
    while index < len(lines) and lines[index].startswith("#"):
        comments.append(lines[index][1:].strip())
        index += 1
    if not comments:
        raise InputError("CSV is missing its provenance line")
    reader = csv.reader(lines[index:])
    try:
        columns = tuple(next(reader))
    except StopIteration:
        raise InputError("CSV has no header row") from None
    rows = []
    for row in reader:
        if len(row) != len(columns):
            raise InputError(f"CSV row has {len(row)} cells, expected {len(columns)}: {row}")
        rows.append(tuple(row))
    return CsvDocument(
        provenance=comments[0],
        comments=tuple(comments[1:]),
        columns=columns,
        rows=tuple(rows),
    )


def _expect(document: CsvDocument, columns: Sequence[str]) -> None:
    if document.columns != tuple(columns):
        raise InputError(f"unexpected CSV columns {list(document.columns)}")


def _optional_float(text: str) -> Optional[float]:
    return None if text == "" else float(text)


def read_amplitude_csv(text: str, *, degrees: bool = False) -> List[AmplitudeSample]:
    document = parse_document(text)
    _expect(document, AMPLITUDE_COLUMNS)
    samples = []
    for rec in document.records():
        theta = float(rec["theta"])
        samples.append(
            AmplitudeSample(
                theta=math.radians(theta) if degrees else theta,
                F=Quaternion.from_components(
                    float(rec["F_w"]), float(rec["F_x"]), float(rec["F_y"]), float(rec["F_z"])
                ),
                sigma_diff=float(rec["sigma_diff"]),
            )
        )
    return samples


def read_cross_section_csv(text: str) -> List[CrossSectionRow]:
    document = parse_document(text)
    _expect(document, CROSS_SECTION_COLUMNS)
    return [
        CrossSectionRow(**{name: float(rec[name]) for name in CROSS_SECTION_COLUMNS})
        for rec in document.records()
    ]


def read_hard_sphere_csv(text: str) -> Tuple[List[HardSphereRow], Dict[str, float]]:
    """Per-mode rows (angles as written) and the ``key=value`` summary comments."""
    document = parse_document(text)
    _expect(document, HARD_SPHERE_COLUMNS)
    summary = {}
    for comment in document.comments:
        key, _, value = comment.partition("=")
        summary[key] = float(value)
    rows = [
        HardSphereRow(
            ell=int(rec["ell"]),
            kR=float(rec["kR"]),
            delta=float(rec["delta"]),
            theta_pol=float(rec["theta_pol"]),
            delta_low_energy=float(rec["delta_low_energy"]),
            theta_pol_low_energy=float(rec["theta_pol_low_energy"]),
            saturated=rec["saturated"] == "true",
        )
        for rec in document.records()
    ]
    return rows, summary


def read_matching_csv(text: str) -> List[MatchingResidualReport]:
    document = parse_document(text)
    _expect(document, MATCHING_COLUMNS)

    notes: Dict[int, List[str]] = {}
    for comment in document.comments:
        match = _NOTE_LINE.match(comment)
        if match:
            notes.setdefault(int(match.group(1)), []).append(match.group(2))

    grouped: Dict[int, List[Dict[str, str]]] = {}
    for rec in document.records():
        grouped.setdefault(int(rec["ell"]), []).append(rec)

    reports = []
    for ell, recs in grouped.items():
        first = recs[0]
        g1_re = _optional_float(first["gamma1_re"])
        g1_im = _optional_float(first["gamma1_im"])
        residuals = tuple(
            ConventionResidual(
                convention=rec["convention"],
                numeric=Quaternion.from_components(
                    float(rec["numeric_w"]),
                    float(rec["numeric_x"]),
                    float(rec["numeric_y"]),
                    float(rec["numeric_z"]),
                ),
                gamma0_residual=_optional_float(rec["gamma0_residual"]),
                gamma1_residual=_optional_float(rec["gamma1_residual"]),
            )
            for rec in recs
        )
        reports.append(
            MatchingResidualReport(
                ell=ell,
                k=float(first["k"]),
                a=float(first["a"]),
                gamma0=_optional_float(first["gamma0"]),
                gamma1=None if g1_re is None or g1_im is None else complex(g1_re, g1_im),
                residuals=residuals,
                notes=tuple(notes.get(ell, ())),
            )
        )
    return reports


def read_consistency_csv(text: str) -> ConsistencyReport:
    document = parse_document(text)
    _expect(document, CONSISTENCY_COLUMNS)
    scalars: Dict[str, float] = {}
    flux = []
    notes = []
    for rec in document.records():
        quantity = rec["quantity"]
        if quantity == "flux_residual":
            flux.append((float(rec["r"]), float(rec["value"])))
        elif quantity == "note":
            notes.append(rec["value"])
        else:
            scalars[quantity] = float(rec["value"])
    missing = {"sigma_closed", "sigma_quadrature", "sigma_optical"} - scalars.keys()
    if missing:
        raise InputError(f"consistency CSV lacks {sorted(missing)}")
    return ConsistencyReport(
        sigma_closed=scalars["sigma_closed"],
        sigma_quadrature=scalars["sigma_quadrature"],
        sigma_optical=scalars["sigma_optical"],
        flux_residuals=tuple(flux),
        notes=tuple(notes),
    )
