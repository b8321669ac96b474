"""Exact combinatorial toolkit for general Kneser graphs of tree families:
cut numbers, generalized and alternating Turan numbers, the staged edge
ordering, and forest-property checkers."""

from .altcolor import (
    AlternatingColoring,
    EdgeOrdering,
    TourCertificate,
    ex_alt_fixed,
    ex_alt_min,
    realize_coloring,
)
from .cuts import cut_decomp, cut_r, min_cut_global, turan_ex
from .forestprop import (
    check_lemma3,
    check_lemma4,
    rainbow_cycles,
    verify_forest_property_exhaustive,
)
from .graphs import (
    Decomposition,
    EdgeSet,
    FamilyDescriptor,
    Graph,
    GraphError,
    complete_graph,
    cycle_graph,
    matching_graph,
    parse_decomposition,
    parse_graph,
    path_graph,
    trivial_decomposition,
    validate_decomposition,
)
from .harness import (
    families_crosscheck,
    random_dense_graph,
    verify_theorem,
)
from .kneser import (
    BoundedValue,
    KneserInstance,
    build_kneser,
    chromatic_number,
    clique_number,
    greedy_upper_coloring,
)
from .sigma import build_sigma, export_sigma
from .subtrees import (
    contains_G_tree,
    enumerate_family,
    extend_forest_to_tree,
    find_G_forest,
    find_G_tree,
)

__version__ = "0.1.0"

__all__ = [
    "AlternatingColoring",
    "BoundedValue",
    "Decomposition",
    "EdgeOrdering",
    "EdgeSet",
    "FamilyDescriptor",
    "Graph",
    "GraphError",
    "KneserInstance",
    "TourCertificate",
    "build_kneser",
    "build_sigma",
    "check_lemma3",
    "check_lemma4",
    "chromatic_number",
    "clique_number",
    "complete_graph",
    "contains_G_tree",
    "cut_decomp",
    "cut_r",
    "cycle_graph",
    "enumerate_family",
    "ex_alt_fixed",
    "ex_alt_min",
    "export_sigma",
    "extend_forest_to_tree",
    "families_crosscheck",
    "find_G_forest",
    "find_G_tree",
    "greedy_upper_coloring",
    "matching_graph",
    "min_cut_global",
    "parse_decomposition",
    "parse_graph",
    "path_graph",
    "rainbow_cycles",
    "random_dense_graph",
    "realize_coloring",
    "trivial_decomposition",
    "turan_ex",
    "validate_decomposition",
    "verify_forest_property_exhaustive",
    "verify_theorem",
]
