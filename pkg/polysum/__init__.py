"""Exact Minkowski sums of polytopes, their graphs and diameters."""

__version__ = "0.4.0"

from .geometry.polytope import ExactPolytope, Halfspace, Hyperplane, hull_from_vertices, vertices_from_halfspaces
from .graph import build_graph, diameter
from .io.polyfile import emit_polytope_file, parse_polytope_file
from .minkowski import minkowski_sum

__all__ = [
    "ExactPolytope",
    "Halfspace",
    "Hyperplane",
    "build_graph",
    "diameter",
    "emit_polytope_file",
    "hull_from_vertices",
    "minkowski_sum",
    "parse_polytope_file",
    "vertices_from_halfspaces",
]
