"""Figure pipeline for harness CSV/JSON outputs."""

from .figures import FigureSpec, render_comparison, render_robustness, render_scaling
from .schema import (
    COMPARE_COLUMNS,
    SWEEP_COLUMNS,
    TRACE_COLUMNS,
    SchemaError,
    read_compare,
    read_summary,
    read_sweep,
    read_table,
    read_trace,
)

__version__ = "0.1.0"

__all__ = [
    "FigureSpec",
    "SchemaError",
    "TRACE_COLUMNS",
    "SWEEP_COLUMNS",
    "COMPARE_COLUMNS",
    "read_table",
    "read_trace",
    "read_sweep",
    "read_compare",
    "read_summary",
    "render_scaling",
    "render_robustness",
    "render_comparison",
    "__version__",
]
