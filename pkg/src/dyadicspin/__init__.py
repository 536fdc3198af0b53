"""Transport, entanglement, chaos, and cavity design tools for sparse
power-of-two coupled spin chains."""

from dyadicspin.geometry import (
    CouplingModel,
    archimedean_distance,
    coupling,
    coupling_table,
    graph_distance,
    graph_distances_from,
    interaction_matrix,
    monna_map,
    monna_permutation,
    tree_distance,
    two_adic_norm,
)

__all__ = [
    "CouplingModel",
    "archimedean_distance",
    "coupling",
    "coupling_table",
    "graph_distance",
    "graph_distances_from",
    "interaction_matrix",
    "monna_map",
    "monna_permutation",
    "tree_distance",
    "two_adic_norm",
]

__version__ = "0.1.0"
