"""cqedfigs: figure generation from cqedlab CSV output."""

__version__ = "0.1.0"

from .render import FIGURES, FigureSpec, render

__all__ = ["FIGURES", "FigureSpec", "render", "__version__"]
