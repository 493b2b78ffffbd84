"""Figure rendering for hoaxnet experiment CSV output."""

from .render import (
    KINDS,
    FigureData,
    FigureDataError,
    FigureJob,
    Panel,
    Series,
    draw,
    load_figure_data,
    render,
)

__all__ = [
    "KINDS",
    "FigureData",
    "FigureDataError",
    "FigureJob",
    "Panel",
    "Series",
    "draw",
    "load_figure_data",
    "render",
]
