"""Partial tree embeddings of hop-constrained distances and bicriteria network design."""

__version__ = "0.1.0"

from .config import Constants, RunConfig
from .connectors import (
    HopConnector,
    Projection,
    build_hop_connector,
    euler_tour_connector,
    extract_connector_forest,
    project_subgraph,
)
from .decomposition import (
    DecompositionParams,
    MixtureMetric,
    PartialVertexPartition,
    hop_constrained_decomposition,
    mixture_weights,
    padded_decomposition,
)
from .demands import DemandSet, parse_demands
from .errors import *  # noqa: F401,F403
from .graph import (
    HopPath,
    Subgraph,
    WeightedGraph,
    complete_closure,
    hop_distance,
    hop_distances,
    hop_shortest_path,
    parse_graph,
    trivial_metric_approx,
)
from .partial_tree import (
    PartialTreeEmbedding,
    RootedTree,
    StretchReport,
    WellSeparatedTree,
    complete_to_embedding,
    measure_stretch,
    sample_partial_tree_embedding,
    sample_partial_tree_metric,
)
from .repetition import EdgeSet, RepetitionTreeEmbedding, build_repetition_tree, map_graph_to_tree, map_tree_to_graph
from .rng import stream
from .solvers import (
    BicriteriaSolution,
    PathTable,
    min_cost_spanner,
    online_group_steiner,
    online_group_steiner_forest,
    solve_group_steiner_forest,
    solve_group_steiner_merging,
    solve_group_steiner_reptree,
    solve_k_steiner,
    solve_oblivious_network_design,
    solve_oblivious_steiner_forest,
)
from .tree_solvers import (
    GroupInstance,
    LoadCostFunction,
    group_steiner_on_tree_exact,
    k_steiner_on_tree,
    network_design_on_tree,
    steiner_forest_on_tree,
)
