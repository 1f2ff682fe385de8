"""
Audit logging shared by all powerbound packages.

Each package writes its events into ``<log_dir>/<name>_audit.log``.
"""

import logging
import os
from logging.handlers import RotatingFileHandler

from . import config


def get_audit_logger(name: str) -> logging.Logger:
    """
    Configure and return a logger that writes audit events for the
    ``name`` package into <log_dir>/<name>_audit.log.

    Args:
        name: Short package name, e.g. ``"circle_sets"``.

    Returns:
        logging.Logger: The configured audit logger.
    """
    logger = logging.getLogger(f"{name}_audit")
    if logger.handlers:
        # Already configured (avoid adding handlers twice on re-import)
        return logger

    logger.setLevel(logging.INFO)

    os.makedirs(config.LOG_DIR, exist_ok=True)

    log_path = os.path.join(config.LOG_DIR, f"{name}_audit.log")
    handler = RotatingFileHandler(log_path, maxBytes=1_000_000, backupCount=3)
    formatter = logging.Formatter(
        "%(asctime)s - %(levelname)s - %(message)s"
    )
    handler.setFormatter(formatter)
    logger.addHandler(handler)

    return logger
