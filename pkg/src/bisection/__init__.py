"""Exact Min/Max Bisection: treewidth DP, vertex-cover FPT, line graphs, reduction gadgets."""
from .decomposition import (
    InvalidDecompositionError,
    NiceDecomposition,
    TDFormatError,
    TreeDecomposition,
    heuristic_td,
    make_nice,
    parse_td,
    validate_td,
)
from .graph import (
    A,
    B,
    Bisection,
    Cut,
    Graph,
    GraphFormatError,
    complement,
    cut_value,
    is_bisection,
    parse_graph,
)
from .line import NotLineGraphError, check_certificate, max_bisection_line
from .oracle import brute_bisection, brute_maxcut
from .treewidth import cut_profile, max_bisection, min_bisection, solve_max, solve_min
from .vertex_cover import max_bisection_vc, min_bisection_vc, minimum_vertex_cover, vertex_cover

__version__ = "0.1.0"

__all__ = [
    "A", "B", "Bisection", "Cut", "Graph", "GraphFormatError", "InvalidDecompositionError",
    "NiceDecomposition", "NotLineGraphError", "TDFormatError", "TreeDecomposition",
    "brute_bisection", "brute_maxcut", "check_certificate", "complement", "cut_profile",
    "cut_value", "heuristic_td", "is_bisection", "make_nice", "max_bisection",
    "max_bisection_line", "max_bisection_vc", "min_bisection", "min_bisection_vc",
    "minimum_vertex_cover", "parse_graph", "parse_td", "solve_max", "solve_min",
    "validate_td", "vertex_cover",
]
