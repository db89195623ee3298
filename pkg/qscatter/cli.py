"""Command-line front end.

Exit codes: 0 success, 2 input error (bad flags, unreadable or malformed model file,
invalid model parameters), 3 numeric domain error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

from . import __version__
from .commands import DEFAULT_THETA_POINTS, CommandRequest, parse_sweep, run_command, tree
from .config import settings
from .errors import InputError, QScatterError
from .specfile import load_spec

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Argument types
# ---------------------------------------------------------------------------


def _finite_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite, got {text!r}")
    return value


def _positive_float(text: str) -> float:
    value = _finite_float(text)
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text!r}")
    return value


def _radii(text: str) -> Tuple[float, ...]:
    return tuple(_positive_float(part) for part in text.split(",") if part.strip())


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _add_model_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--spec", type=Path, help="Model file ([modes] or [hard_sphere]).")
    parser.add_argument("--k", type=_positive_float, help="Wave number; overrides the file.")
    parser.add_argument("--radius", type=_positive_float, help="Hard-sphere radius R.")
    parser.add_argument("--lmax", type=_non_negative_int, help="Largest partial wave ell.")
    parser.add_argument("--xi", type=_finite_float, help="Hard-sphere quaternionic phase xi.")
    parser.add_argument(
        "--clamp",
        action="store_true",
        help="Clamp saturated hard-sphere modes (|y_ell(kR)| < 1) to Theta = +-pi/2.",
    )
    parser.add_argument(
        "--degrees",
        action="store_true",
        help="Read model angles and write output angles in degrees.",
    )
    parser.add_argument("--out", type=Path, help="Write CSV here instead of stdout.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qscatter",
        description="Elastic scattering with quaternionic partial waves.",
    )
    parser.add_argument("--version", action="version", version=f"qscatter {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for command in tree:
        cmd_parser = sub.add_parser(command.name, help=command.description)
        _add_model_arguments(cmd_parser)
        if command.name == "amplitude":
            cmd_parser.add_argument(
                "--theta-points",
                type=int,
                default=DEFAULT_THETA_POINTS,
                help="Number of evenly spaced angles in [0, pi].",
            )
        elif command.name == "cross-section":
            cmd_parser.add_argument(
                "--sweep",
                help="START:STOP:N over kR for a hard sphere, over k for a mode table.",
            )
            cmd_parser.add_argument(
                "--workers",
                type=int,
                default=settings.workers,
                help="Threads used to evaluate sweep points.",
            )
        elif command.name == "match":
            cmd_parser.add_argument(
                "--match-radius",
                type=_positive_float,
                help="Matching radius a (defaults to R for a hard sphere).",
            )
        elif command.name == "optical":
            cmd_parser.add_argument(
                "--radii",
                type=_radii,
                help="At least 4 comma-separated increasing radii for the flux integral.",
            )

    return parser


# ---------------------------------------------------------------------------
# Request assembly
# ---------------------------------------------------------------------------


def _parameters(args: argparse.Namespace) -> Dict[str, object]:
    """Flags that shape the output, for the CSV provenance line."""
    params: Dict[str, object] = {
        "spec": None if args.spec is None else str(args.spec),
        "k": args.k,
        "radius": args.radius,
        "lmax": args.lmax,
        "xi": args.xi,
        "clamp": args.clamp,
        "degrees": args.degrees,
        "quad_order": settings.quad_order,
    }
    for name in ("theta_points", "sweep", "match_radius", "radii"):
        if hasattr(args, name):
            params[name] = getattr(args, name)
    return params


def build_request(args: argparse.Namespace) -> CommandRequest:
    spec = load_spec(args.spec, degrees=args.degrees) if args.spec is not None else None
    xi = args.xi
    if xi is not None and args.degrees:
        xi = math.radians(xi)
    sweep = getattr(args, "sweep", None)
    workers = getattr(args, "workers", settings.workers)
    if workers < 1:
        raise InputError(f"--workers must be at least 1, got {workers}")
    return CommandRequest(
        spec=spec,
        k=args.k,
        radius=args.radius,
        lmax=args.lmax,
        xi=xi,
        clamp=args.clamp,
        theta_points=getattr(args, "theta_points", DEFAULT_THETA_POINTS),
        sweep=parse_sweep(sweep) if sweep is not None else None,
        match_radius=getattr(args, "match_radius", None),
        radii=getattr(args, "radii", None),
        degrees=args.degrees,
        workers=workers,
        parameters=_parameters(args),
    )


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        out.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc.strerror or exc}") from None
    logger.info("Wrote %s", out)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run one command and return the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        # --help / --version exit 0, usage errors exit 2
        return int(exc.code or 0)

    try:
        request = build_request(args)
        _emit(run_command(args.command, request), args.out)
    except QScatterError as exc:
        logger.error("%s failed: %s", args.command, exc)
        return exc.exit_code
    except ValueError as exc:
        # invalid model parameters rejected by the domain types
        logger.error("%s failed: %s", args.command, exc)
        return InputError.exit_code
    return 0
