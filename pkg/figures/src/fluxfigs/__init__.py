"""Figure rendering for fvdiss CSV outputs."""

from .render import FIGURE_IDS, FigureSpec, RenderError, render

__version__ = "0.1.0"
