"""Spanning-tree Gaussian models, cycle ML degrees and symmetric determinantal representations."""

from .errors import HomaloidalError
from .graph import DIAMOND_GRAPH, Graph, is_chordal, laplacian, ml_degree_certificate, spanning_tree_poly
from .mldeg import cycle_fiber, eulerian, ml_degree_cycle
from .pencil import SymPencil
from .poly import MPoly, parse

__all__ = [
    "DIAMOND_GRAPH",
    "Graph",
    "HomaloidalError",
    "MPoly",
    "SymPencil",
    "cycle_fiber",
    "eulerian",
    "is_chordal",
    "laplacian",
    "ml_degree_certificate",
    "ml_degree_cycle",
    "parse",
    "spanning_tree_poly",
]

__version__ = "0.1.0"
