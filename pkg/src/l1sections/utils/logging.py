# src/l1sections/utils/logging.py
import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Any, Dict, List

# Third-party loggers that are chatty at INFO
NOISY_LOGGERS = ("galois", "numba", "matplotlib")

DEFAULT_FORMAT = "%(asctime)s [%(levelname)s] %(name)s - %(message)s"


def _level(name: Any, default: int = logging.INFO) -> int:
    if isinstance(name, int):
        return name
    return getattr(logging, str(name).upper(), default)


def _build_handlers(config: Dict[str, Any], formatter: logging.Formatter) -> List[logging.Handler]:
    handlers: List[logging.Handler] = []
    if config.get("console", True):
        handlers.append(logging.StreamHandler(sys.stdout))
    if config.get("file"):
        log_file_path = Path(config["file"])
        log_file_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.handlers.RotatingFileHandler(
            log_file_path,
            maxBytes=config.get("max_size", 10 * 1024 * 1024),
            backupCount=config.get("backup_count", 5),
            encoding="utf-8",
        ))
    for handler in handlers:
        # filtering happens on the loggers so per-package levels can go below the root level
        handler.setLevel(logging.NOTSET)
        handler.setFormatter(formatter)
    return handlers


def setup_logging(config: Dict[str, Any]) -> logging.Logger:
    """
    Configures the root logger from the ``logging`` config section.

    Keys: ``level``, ``format``, ``console``, ``file`` (rotated by ``max_size``
    and ``backup_count``) and ``levels``, a mapping from logger name to level,
    e.g. ``{"l1sections.analysis.spread": "DEBUG"}`` to trace sampling blocks
    without turning on DEBUG everywhere. Calling it again replaces the handlers.
    """
    root_level = _level(config.get("level", "INFO"))
    root_logger = logging.getLogger()
    root_logger.setLevel(root_level)
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    formatter = logging.Formatter(config.get("format", DEFAULT_FORMAT))
    for handler in _build_handlers(config, formatter):
        root_logger.addHandler(handler)

    for name in NOISY_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)
    for name, level in (config.get("levels") or {}).items():
        logging.getLogger(name).setLevel(_level(level))

    app_logger = logging.getLogger("l1sections")
    app_logger.info(
        f"Logging setup complete. Level: {logging.getLevelName(root_level)}, File: {config.get('file') or 'none'}"
    )
    return app_logger
