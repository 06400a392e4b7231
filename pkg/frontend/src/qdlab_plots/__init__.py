"""Static publication figures rendered from qdlab CSV result files.

This package never imports qdlab; it consumes only the CSV/manifest file
formats the qdlab CLI writes.
"""

from .csvio import CsvTable, read_table
from .figures import FIGURE_KINDS, FigureSpec, build_figure, render

__version__ = "0.1.0"

__all__ = ["CsvTable", "read_table", "FigureSpec", "FIGURE_KINDS",
           "build_figure", "render"]
