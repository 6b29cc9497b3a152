"""Structured logging module"""

import json
import logging
import sys
from datetime import datetime, timezone
from typing import Dict

_HANDLERS: Dict[str, logging.Handler] = {}
_STATE = {"level": logging.INFO, "format": "json"}


class JSONFormatter(logging.Formatter):
    """JSON log formatter"""

    def format(self, record: logging.LogRecord) -> str:
        log_obj = {
            "ts": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
            "level": record.levelname.lower(),
            "phase": record.name.split(".")[-1],
            "msg": record.getMessage(),
        }

        # Add extra fields if present
        if hasattr(record, "run_id"):
            log_obj["run_id"] = record.run_id
        if hasattr(record, "meta"):
            log_obj["meta"] = record.meta

        return json.dumps(log_obj, default=str)


class TextFormatter(logging.Formatter):
    """Single-line human readable formatter"""

    def format(self, record: logging.LogRecord) -> str:
        line = f"{record.levelname:<7} {record.name.split('.')[-1]:<10} {record.getMessage()}"
        if hasattr(record, "meta"):
            line = f"{line} {json.dumps(record.meta, default=str)}"
        return line


def _formatter() -> logging.Formatter:
    return TextFormatter() if _STATE["format"] == "text" else JSONFormatter()


def configure_logging(level: str = "INFO", fmt: str = "json") -> None:
    """Apply level and format to every logger handed out so far (and later ones)"""
    resolved = logging.getLevelName(str(level).upper())
    if not isinstance(resolved, int):
        resolved = logging.INFO
    _STATE["level"] = resolved
    _STATE["format"] = "text" if str(fmt).lower() == "text" else "json"
    for name, handler in _HANDLERS.items():
        handler.setFormatter(_formatter())
        logging.getLogger(name).setLevel(resolved)


def get_logger(name: str) -> logging.Logger:
    """Get configured logger instance"""
    logger = logging.getLogger(name)

    if name not in _HANDLERS:
        # stderr: stdout carries command results (count-trees)
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(_formatter())
        logger.addHandler(handler)
        logger.setLevel(_STATE["level"])
        _HANDLERS[name] = handler

    return logger
