"""Deterministic figure rendering for the noble-gas squeezing toolkit."""

__version__ = "0.1.0"

from .render import (
    EmptyData,
    SchemaError,
    load_map,
    load_points,
    load_series,
    render_curves,
    render_heatmap,
)

__all__ = [
    "EmptyData",
    "SchemaError",
    "load_map",
    "load_points",
    "load_series",
    "render_curves",
    "render_heatmap",
]
