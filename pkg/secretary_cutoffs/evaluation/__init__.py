"""
Exact evaluation of cutoff policies
"""

from .quadrature import Quadrature
from .evaluator import PolicyEvaluator

__all__ = [
    "Quadrature",
    "PolicyEvaluator",
]
