"""
Logging setup for the library and the command line
"""

import logging
import logging.config
import os
from pathlib import Path
from typing import Any, Dict, Optional

LOG_LEVEL_ENV = "SECRETARY_LOG_LEVEL"
LOG_FILE_ENV = "SECRETARY_LOG_FILE"
VALID_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]

LOG_FILE_MAX_BYTES = 10 * 1024 * 1024
LOG_FILE_BACKUPS = 5

DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
FORMATTERS = {
    "standard": {"format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s", "datefmt": DATE_FORMAT},
    "detailed": {"format": "%(asctime)s - %(name)s - %(levelname)s - %(module)s:%(funcName)s:%(lineno)d - %(message)s", "datefmt": DATE_FORMAT},
    "simple": {"format": "%(levelname)s: %(message)s"},
}


def console_handler(level: str) -> Dict[str, Any]:
    # stdout carries results only
    return {"class": "logging.StreamHandler", "level": level, "formatter": "simple", "stream": "ext://sys.stderr"}


def file_handler(level: str, log_file: str) -> Dict[str, Any]:
    return {
        "class": "logging.handlers.RotatingFileHandler",
        "level": level,
        "formatter": "detailed",
        "filename": log_file,
        "maxBytes": LOG_FILE_MAX_BYTES,
        "backupCount": LOG_FILE_BACKUPS,
        "encoding": "utf-8",
    }


class LoggingConfig:
    """Centralized logging configuration"""

    LOGGER_NAME = "secretary_cutoffs"

    @staticmethod
    def setup(log_level: str = "INFO", log_file: Optional[str] = None) -> None:
        """
        Configure the package logger

        Args:
            log_level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
            log_file: Also write a rotating log here (optional)
        """
        handlers = {"console": console_handler(log_level)}
        if log_file:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)
            handlers["file"] = file_handler(log_level, log_file)

        logging.config.dictConfig(
            {
                "version": 1,
                "disable_existing_loggers": False,
                "formatters": FORMATTERS,
                "handlers": handlers,
                "loggers": {LoggingConfig.LOGGER_NAME: {"level": log_level, "handlers": list(handlers), "propagate": False}},
                "root": {"level": "WARNING", "handlers": ["console"]},
            }
        )

    @staticmethod
    def get_logger(name: str) -> logging.Logger:
        return logging.getLogger(name)

    @staticmethod
    def resolve_level(log_level: Optional[str] = None) -> str:
        """Explicit level, else SECRETARY_LOG_LEVEL, else INFO; unknown names fall back to INFO"""
        level = (log_level or os.getenv(LOG_LEVEL_ENV, "INFO")).upper()
        return level if level in VALID_LEVELS else "INFO"

    @staticmethod
    def setup_default(log_level: Optional[str] = None) -> None:
        """Setup logging from the environment, with an optional level override"""
        LoggingConfig.setup(LoggingConfig.resolve_level(log_level), os.getenv(LOG_FILE_ENV))
