"""
Optimal cutoffs for the secretary problem with general utilities
"""

__version__ = "0.1.0"
