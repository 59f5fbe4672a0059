"""Heatmap renderer for Wigner-grid CSV files."""

from .render import PlotError, load_grid, main, render

__all__ = ["PlotError", "load_grid", "main", "render"]
__version__ = "0.1.0"
