from __future__ import annotations

import os
import logging

from .._constants import ENV_LOG

logger: logging.Logger = logging.getLogger("ricci_lab")

_LEVELS = {"debug": logging.DEBUG, "info": logging.INFO, "warning": logging.WARNING}


def _basic_config() -> None:
    # e.g. [2023-09-05 14:21:47 - ricci_lab.dynamics:212 - INFO] flow converged after 371 steps
    logging.basicConfig(
        format="[%(asctime)s - %(name)s:%(lineno)d - %(levelname)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )


def setup_logging(level: str | int | None = None) -> None:
    """Configure the package logger.

    An explicit `level` wins over the `RICCI_LAB_LOG` environment variable.
    Without either, the package stays silent beyond warnings.
    """
    if level is None:
        level = os.environ.get(ENV_LOG)
    if level is None:
        return

    if isinstance(level, str):
        resolved = _LEVELS.get(level.lower())
        if resolved is None:
            logger.warning("ignoring unknown log level %r", level)
            return
        level = resolved

    _basic_config()
    logger.setLevel(level)
