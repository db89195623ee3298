"""Model specification files.

A model file is line oriented. ``#`` starts a comment, blank lines are ignored.

    # top level
    k = 1.5

    [modes]
    ell   delta   theta_pol   xi
    0     0.30    0.10        0.0
    1     0.05    0.02        0.0

or, for the rigid sphere,

    k = 2.0

    [hard_sphere]
    R = 0.25
    ell_max = 4        # optional, defaults to ceil(kR) + 8
    xi = 0.0           # optional
    clamp = false      # optional

Exactly one of ``[modes]`` and ``[hard_sphere]`` must appear. The first non-comment
line of ``[modes]`` is the column header; ``xi`` may be omitted and defaults to 0.
Angles are radians unless the caller asks for degrees.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .errors import SpecParseError
from .partial_waves import ModeParams

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\S+")
_MODE_COLUMNS = ("ell", "delta", "theta_pol", "xi")
_REQUIRED_MODE_COLUMNS = ("ell", "delta", "theta_pol")
_HARD_SPHERE_KEYS = ("R", "ell_max", "xi", "clamp")


@dataclass(frozen=True)
class HardSphereSpec:
    R: float
    ell_max: Optional[int] = None
    xi: float = 0.0
    clamp: bool = False


@dataclass(frozen=True)
class ModelSpecFile:
    k: float
    modes: Optional[Tuple[ModeParams, ...]] = None
    hard_sphere: Optional[HardSphereSpec] = None


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _tokens(line: str) -> List[Tuple[str, int]]:
    """Whitespace-separated tokens with 1-based columns, comments stripped."""
    body = line.split("#", 1)[0]
    return [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(body)]


def _float(text: str, line: int, column: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise SpecParseError(f"{what} must be a number, got {text!r}", line, column) from None
    if not math.isfinite(value):
        raise SpecParseError(f"{what} must be finite, got {text!r}", line, column)
    return value


def _int(text: str, line: int, column: int, what: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise SpecParseError(f"{what} must be an integer, got {text!r}", line, column) from None
    if value < 0:
        raise SpecParseError(f"{what} must be non-negative, got {value}", line, column)
    return value


def _bool(text: str, line: int, column: int, what: str) -> bool:
    lowered = text.lower()
    if lowered in {"true", "yes", "1"}:
        return True
    if lowered in {"false", "no", "0"}:
        return False
    raise SpecParseError(f"{what} must be true or false, got {text!r}", line, column)


def _assignment(line: str, lineno: int) -> Tuple[str, str, int, int]:
    body = line.split("#", 1)[0]
    if "=" not in body:
        column = len(body) - len(body.lstrip()) + 1
        raise SpecParseError("expected 'key = value'", lineno, column)
    key_part, value_part = body.split("=", 1)
    key = key_part.strip()
    value = value_part.strip()
    key_col = len(key_part) - len(key_part.lstrip()) + 1
    value_col = len(key_part) + 2 + (len(value_part) - len(value_part.lstrip()))
    if not key:
        raise SpecParseError("missing key before '='", lineno, key_col)
    if not value:
        raise SpecParseError(f"missing value for {key!r}", lineno, value_col)
    return key, value, key_col, value_col


def parse_spec(text: str, *, degrees: bool = False) -> ModelSpecFile:
    """Parse a model file; angle fields are converted from degrees when asked."""
    k: Optional[float] = None
    section: Optional[str] = None
    seen_sections: Dict[str, int] = {}
    header: Optional[List[str]] = None
    rows: List[ModeParams] = []
    row_lines: Dict[int, int] = {}
    hard: Dict[str, Tuple[str, int, int]] = {}
    angle = math.radians if degrees else float

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokens(raw)
        if not tokens:
            continue
        first, first_col = tokens[0]

        if first.startswith("["):
            name = raw.split("#", 1)[0].strip()
            if name not in ("[modes]", "[hard_sphere]"):
                raise SpecParseError(f"unknown section {name!r}", lineno, first_col)
            section = name[1:-1]
            if section in seen_sections:
                raise SpecParseError(
                    f"section [{section}] repeated (first at line {seen_sections[section]})",
                    lineno,
                    first_col,
                )
            seen_sections[section] = lineno
            continue

        if section is None:
            key, value, key_col, value_col = _assignment(raw, lineno)
            if key != "k":
                raise SpecParseError(f"unknown top-level key {key!r}", lineno, key_col)
            if k is not None:
                raise SpecParseError("duplicate key 'k'", lineno, key_col)
            k = _float(value, lineno, value_col, "k")
            if k <= 0.0:
                raise SpecParseError("k must be positive", lineno, value_col)
            continue

        if section == "hard_sphere":
            key, value, key_col, value_col = _assignment(raw, lineno)
            if key not in _HARD_SPHERE_KEYS:
                raise SpecParseError(f"unknown [hard_sphere] key {key!r}", lineno, key_col)
            if key in hard:
                raise SpecParseError(f"duplicate key {key!r}", lineno, key_col)
            hard[key] = (value, lineno, value_col)
            continue

        # [modes]
        if header is None:
            header = [tok for tok, _ in tokens]
            for tok, col in tokens:
                if tok not in _MODE_COLUMNS:
                    raise SpecParseError(f"unknown mode column {tok!r}", lineno, col)
            if len(set(header)) != len(header):
                raise SpecParseError("repeated column in [modes] header", lineno, first_col)
            missing = [c for c in _REQUIRED_MODE_COLUMNS if c not in header]
            if missing:
                raise SpecParseError(f"[modes] header lacks {missing}", lineno, first_col)
            continue

        if len(tokens) != len(header):
            column = tokens[-1][1] if len(tokens) > len(header) else len(raw.rstrip()) + 1
            raise SpecParseError(
                f"expected {len(header)} columns, got {len(tokens)}", lineno, column
            )
        fields = {name: tok for name, tok in zip(header, tokens)}
        ell_tok, ell_col = fields["ell"]
        ell = _int(ell_tok, lineno, ell_col, "ell")
        if ell in row_lines:
            raise SpecParseError(
                f"duplicate ell={ell} (first at line {row_lines[ell]})", lineno, ell_col
            )
        values = {}
        for name in ("delta", "theta_pol", "xi"):
            if name in fields:
                tok, col = fields[name]
                values[name] = angle(_float(tok, lineno, col, name))
        theta_tok, theta_col = fields["theta_pol"]
        if abs(values["theta_pol"]) > math.pi / 2:
            raise SpecParseError("theta_pol must lie in [-pi/2, pi/2]", lineno, theta_col)
        rows.append(ModeParams(ell, values["delta"], values["theta_pol"], values.get("xi", 0.0)))
        row_lines[ell] = lineno

    last_line = max(1, len(text.splitlines()))
    if k is None:
        raise SpecParseError("missing top-level 'k = ...'", last_line)
    if ("modes" in seen_sections) == ("hard_sphere" in seen_sections):
        raise SpecParseError("exactly one of [modes] and [hard_sphere] is required", last_line)

    if "modes" in seen_sections:
        if header is None:
            raise SpecParseError("[modes] section has no header", seen_sections["modes"])
        return ModelSpecFile(k=k, modes=tuple(rows))

    if "R" not in hard:
        raise SpecParseError("[hard_sphere] requires 'R'", seen_sections["hard_sphere"])
    r_text, r_line, r_col = hard["R"]
    radius = _float(r_text, r_line, r_col, "R")
    if radius <= 0.0:
        raise SpecParseError("R must be positive", r_line, r_col)
    ell_max = None
    if "ell_max" in hard:
        ell_max = _int(*hard["ell_max"], "ell_max")
    xi = 0.0
    if "xi" in hard:
        xi = angle(_float(*hard["xi"], "xi"))
    clamp = False
    if "clamp" in hard:
        clamp = _bool(*hard["clamp"], "clamp")
    return ModelSpecFile(
        k=k, hard_sphere=HardSphereSpec(R=radius, ell_max=ell_max, xi=xi, clamp=clamp)
    )


def load_spec(path: Path | str, *, degrees: bool = False) -> ModelSpecFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc.strerror or exc}", 1) from None
    logger.debug("Parsing model file %s", path)
    return parse_spec(text, degrees=degrees)
