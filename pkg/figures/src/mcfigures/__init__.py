"""Figure rendering for simulation CSV logs."""

from .render import (
    LATERAL_PRESETS,
    PANELS,
    ColumnError,
    FigureSpec,
    drive_parity,
    normalised_drive,
    order_of,
    read_columns,
    render,
)

__all__ = [
    "LATERAL_PRESETS",
    "PANELS",
    "ColumnError",
    "FigureSpec",
    "drive_parity",
    "normalised_drive",
    "order_of",
    "read_columns",
    "render",
]
