"""
Infrastructure package for cross-cutting concerns
"""

from .config import LoggingConfig
from .cache_manager import ResultCache
from .parsers import ConfigFileParser, RangeParser, UtilitySpecParser

__all__ = [
    "LoggingConfig",
    "ResultCache",
    "ConfigFileParser",
    "RangeParser",
    "UtilitySpecParser",
]
