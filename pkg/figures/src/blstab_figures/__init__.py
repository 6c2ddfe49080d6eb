"""Figure rendering for the boundary-layer stability toolkit's CSV outputs.

Modules:
    render -- CSV schemas, FigureSpec, and the per-kind drawing code.
    cli    -- the `blstab-figures render` command.
"""

from .render import (
    EIGENFUNCTION,
    FIGSIZE,
    KINDS,
    PROFILE,
    SCHEMAS,
    SPECTRUM,
    SWEEP,
    VORTICITY,
    FigureSpec,
    SchemaError,
    read_table,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "EIGENFUNCTION",
    "FIGSIZE",
    "FigureSpec",
    "KINDS",
    "PROFILE",
    "SCHEMAS",
    "SPECTRUM",
    "SWEEP",
    "SchemaError",
    "VORTICITY",
    "read_table",
    "render",
]
