"""
Output package for result files and rendering
"""

from .file_manager import FileManager
from .renderers import FORMATS, ResultRenderer, SweepCsvWriter, format_float
from .manifest import ManifestBuilder

__all__ = [
    "FileManager",
    "FORMATS",
    "ResultRenderer",
    "SweepCsvWriter",
    "format_float",
    "ManifestBuilder",
]
