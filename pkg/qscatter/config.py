from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

# ----------------- dotenv loading -----------------

# Try to load .env from project root. If it's not there, load_dotenv()
# still tries the current working directory, which is fine for most setups.
PROJECT_ROOT = Path(__file__).resolve().parent.parent
ENV_PATH = PROJECT_ROOT / ".env"

if ENV_PATH.exists():
    load_dotenv(ENV_PATH)
else:
    load_dotenv()


# ----------------- helpers -----------------


def _parse_int(value: str | None, *, default: int) -> int:
    if value is None or value == "":
        return default
    try:
        return int(str(value).strip())
    except ValueError:
        return default


def _parse_level(value: str | None, *, default: str) -> str:
    if not value:
        return default
    level = value.strip().upper()
    if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
        return default
    return level


# ----------------- settings dataclass -----------------


@dataclass(frozen=True)
class Settings:
    # Numerics
    quad_order: int
    max_ell: int

    # Sweeps
    workers: int

    # Logging
    log_level: str


def load_settings() -> Settings:
    quad_order = _parse_int(os.getenv("QSCATTER_QUAD_ORDER"), default=64)
    if quad_order < 2:
        raise RuntimeError("QSCATTER_QUAD_ORDER must be at least 2.")

    max_ell = _parse_int(os.getenv("QSCATTER_MAX_ELL"), default=64)
    if max_ell < 0:
        raise RuntimeError("QSCATTER_MAX_ELL must be non-negative.")

    workers = _parse_int(os.getenv("QSCATTER_WORKERS"), default=4)
    if workers < 1:
        raise RuntimeError("QSCATTER_WORKERS must be at least 1.")

    log_level = _parse_level(os.getenv("QSCATTER_LOG_LEVEL"), default="INFO")

    return Settings(
        quad_order=quad_order,
        max_ell=max_ell,
        workers=workers,
        log_level=log_level,
    )


# Convenience: a module-level singleton you can import everywhere.
settings = load_settings()
