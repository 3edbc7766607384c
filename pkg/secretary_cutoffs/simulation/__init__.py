"""
Monte Carlo simulation
"""

from .streams import BlockStreams, RunningStats
from .montecarlo import MonteCarloSimulator

__all__ = [
    "BlockStreams",
    "RunningStats",
    "MonteCarloSimulator",
]
