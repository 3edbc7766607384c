"""
Top-k objective analysis
"""

from .analyzer import TopKAnalyzer
from .enumeration import RankOrderEnumerator

__all__ = [
    "TopKAnalyzer",
    "RankOrderEnumerator",
]
