"""
Asymptotics sweeps and power-law fits
"""

from .objectives import Objective, ObjectiveParser, TopKObjective, UtilityObjective
from .fitting import PowerLawFitter
from .runner import SweepRunner, TOPK_GRID, UTILITY_GRID

__all__ = [
    "Objective",
    "ObjectiveParser",
    "TopKObjective",
    "UtilityObjective",
    "PowerLawFitter",
    "SweepRunner",
    "TOPK_GRID",
    "UTILITY_GRID",
]
