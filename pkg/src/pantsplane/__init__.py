"""Farey-graph arithmetic and pants-graph audits for a genus-2 handle system."""

from .farey import INF, ZERO, Slope, Unimodular, farey_distance, farey_geodesic, periodic_axis
from .handles import HandleSystem
from .pants import PantsVertex, bounded_pants_distance, enumerate_moves, is_elementary_move
from .projection import HandleVertex, project_to_handle, theorem1_shorten_path, theorem2_project_path

__version__ = "0.1.0"

__all__ = [
    "INF",
    "ZERO",
    "HandleSystem",
    "HandleVertex",
    "PantsVertex",
    "Slope",
    "Unimodular",
    "bounded_pants_distance",
    "enumerate_moves",
    "farey_distance",
    "farey_geodesic",
    "is_elementary_move",
    "periodic_axis",
    "project_to_handle",
    "theorem1_shorten_path",
    "theorem2_project_path",
]
