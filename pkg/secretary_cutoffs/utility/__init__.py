"""
Utility functions over relative rank and their constants
"""

from .functions import UtilityFunction, UtilityKind
from .constants import UtilityAnalyzer

__all__ = [
    "UtilityFunction",
    "UtilityKind",
    "UtilityAnalyzer",
]
