from __future__ import annotations

import logging
import sys

from qscatter.cli import run
from qscatter.config import settings


def configure_logging() -> None:
    """Configure logging for the command line; records go to stderr."""

    logging.basicConfig(
        level=getattr(logging, settings.log_level, logging.INFO),
        format="[%(asctime)s] [%(levelname)s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )


def main() -> int:
    """Entry point for the qscatter command line."""

    configure_logging()

    logger = logging.getLogger(__name__)
    logger.debug(
        "Using quad_order=%d, max_ell=%d, workers=%d",
        settings.quad_order,
        settings.max_ell,
        settings.workers,
    )

    return run(sys.argv[1:])


if __name__ == "__main__":
    raise SystemExit(main())
