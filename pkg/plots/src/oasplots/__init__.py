"""Figure generation for oasbench event CSVs.

Consumes only the documented CSV schema (one row per run event); never
imports the benchmark package itself.
"""

from oasplots.figures import (
    FigureSpec,
    PlotDataError,
    plot_fixed_target,
    plot_scaling,
    plot_switch_hist,
)

__version__ = "0.1.0"

__all__ = [
    "FigureSpec",
    "PlotDataError",
    "plot_fixed_target",
    "plot_scaling",
    "plot_switch_hist",
]
