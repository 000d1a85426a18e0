"""Figure rendering for vacuum-sampler scan artifacts.

Reads the CSV tables produced by the scan CLI and renders publication-style
figures (SVG by default).  The renderer is read-only with respect to its
inputs and performs no numerical post-processing beyond axis relabeling;
every physics number comes from the CSV.
"""

__version__ = "0.1.0"

from .reader import MissingColumnError, EmptyTableError, RenderError, read_scan_csv
from .figures import FigureSpec, FIGURE_KINDS, regime_flip_frequencies, render

__all__ = [
    "FigureSpec",
    "FIGURE_KINDS",
    "RenderError",
    "MissingColumnError",
    "EmptyTableError",
    "read_scan_csv",
    "regime_flip_frequencies",
    "render",
    "__version__",
]
