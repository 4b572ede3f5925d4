"""Matched Cartesian/Polar grid-puzzle benchmark: generation, rendering,
evaluation, and a human-rating service."""

__version__ = "0.1.0"

from .answers import Answer, AnswerType, OPTION_LETTERS
from .topology import (
    Boundary,
    CellRef,
    GridSpec,
    Heading,
    Topology,
    heading_delta,
    map_cell,
    neighbors,
    rotate_clockwise,
    step,
)

__all__ = [
    "Answer",
    "AnswerType",
    "Boundary",
    "CellRef",
    "GridSpec",
    "Heading",
    "OPTION_LETTERS",
    "Topology",
    "__version__",
    "heading_delta",
    "map_cell",
    "neighbors",
    "rotate_clockwise",
    "step",
]
