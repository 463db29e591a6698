"""Improving graph robustness to node removal by adding edges.

Thin Python surface over the C++ core: graph construction and generators,
Monte Carlo / exact robustness, spectral quantities, baseline edge
selection, episode runs, and the experiment-table runner.
"""

from robustnet._core import (
    Graph,
    __version__,
    algebraic_connectivity,
    budget_from_edge_percent,
    complete_graph,
    cycle_graph,
    effective_resistance,
    estimate_robustness,
    exact_robustness,
    fiedler_vector,
    generate_ba,
    generate_er_connected,
    laplacian,
    laplacian_pseudoinverse,
    load_and_prepare,
    path_graph,
    read_edge_list_file,
    run_baseline,
    run_table,
    select_edge_eres,
    select_edge_fv,
    select_edge_greedy,
    select_edge_ldp,
    select_edge_random,
    star_graph,
    write_edge_list_file,
)

__all__ = [
    "Graph",
    "__version__",
    "algebraic_connectivity",
    "budget_from_edge_percent",
    "complete_graph",
    "cycle_graph",
    "effective_resistance",
    "estimate_robustness",
    "exact_robustness",
    "fiedler_vector",
    "generate_ba",
    "generate_er_connected",
    "laplacian",
    "laplacian_pseudoinverse",
    "load_and_prepare",
    "path_graph",
    "read_edge_list_file",
    "run_baseline",
    "run_table",
    "select_edge_eres",
    "select_edge_fv",
    "select_edge_greedy",
    "select_edge_ldp",
    "select_edge_random",
    "star_graph",
    "write_edge_list_file",
]
