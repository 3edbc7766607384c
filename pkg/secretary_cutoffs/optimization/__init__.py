"""
Optimal cutoff search
"""

from .optimizer import CutoffOptimizer

__all__ = [
    "CutoffOptimizer",
]
