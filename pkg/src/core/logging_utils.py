from __future__ import annotations

import logging
from pathlib import Path
from typing import Union

LOGGER_NAME = "qb_compiler"
LOG_FORMAT = "%(asctime)s %(levelname)s %(message)s"


def resolve_level(level: Union[int, str]) -> int:
    if isinstance(level, int):
        return level
    value = logging.getLevelName(level.strip().upper())
    if not isinstance(value, int):
        raise ValueError(f"unknown log level {level!r}")
    return value


def setup_logging(log_path: Path, level: Union[int, str] = logging.INFO) -> logging.Logger:
    """File logger for compile runs under runtime_cache, level from `QBC_LOG_LEVEL`.

    Repeated calls with the same path reuse its handler and only update the level.
    """

    log_path.parent.mkdir(parents=True, exist_ok=True)

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(resolve_level(level))

    if not any(isinstance(h, logging.FileHandler) and getattr(h, "baseFilename", "") == str(log_path) for h in logger.handlers):
        handler = logging.FileHandler(log_path, encoding="utf-8")
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)

    return logger
