"""Community-aware node features for sparse graphs.

Load a graph, find (or load) a partition, and compute node features that
measure how each node sits relative to the community structure, alongside
the classical centralities. A seeded planted-partition generator with
outlier nodes provides benchmarks. The ``cafnet`` CLI wires the pieces into
reproducible file-to-file pipelines.
"""

from .classical import (
    ClassicalConfig,
    betweenness,
    closeness_and_eccentricity,
    compute_classical_features,
    coreness,
    degree_centrality,
    eigenvector,
    local_clustering,
    neighbour_degree_centrality,
)
from .detect import DetectConfig, DetectResult, best_partition_of, detect
from .errors import (
    CafnetError,
    EdgeListParseError,
    InfeasibleError,
    InputError,
    ParameterError,
)
from .features import (
    CommunityFeatures,
    CommunityProfile,
    build_profile,
    depth2_profile,
    compute_community_features,
)
from .generator import GenOutput, GenSpec, generate
from .graph import (
    Graph,
    LoadReport,
    connected_components,
    from_edge_pairs,
    giant_component,
    load_edge_list,
    loads_edge_list,
)
from .matrix import (
    CLASSICAL_FEATURE_NAMES,
    COMMUNITY_FEATURE_NAMES,
    DEPTH1_FEATURE_NAMES,
    FeatureMatrix,
)
from .metrics import oriented_rank_auc, rank_auc
from .partition import Partition, load_partition_csv, save_partition_csv
from .quality import (
    generalized_modularity,
    modularity,
    move_gain_degree_tax,
    move_gain_edge_contribution,
    regularized_modularity,
)

__version__ = "0.1.0"

__all__ = [
    "CLASSICAL_FEATURE_NAMES",
    "COMMUNITY_FEATURE_NAMES",
    "DEPTH1_FEATURE_NAMES",
    "CafnetError",
    "ClassicalConfig",
    "CommunityFeatures",
    "CommunityProfile",
    "DetectConfig",
    "DetectResult",
    "EdgeListParseError",
    "FeatureMatrix",
    "GenOutput",
    "GenSpec",
    "Graph",
    "InfeasibleError",
    "InputError",
    "LoadReport",
    "ParameterError",
    "Partition",
    "best_partition_of",
    "build_profile",
    "depth2_profile",
    "betweenness",
    "closeness_and_eccentricity",
    "compute_classical_features",
    "coreness",
    "degree_centrality",
    "eigenvector",
    "local_clustering",
    "neighbour_degree_centrality",
    "compute_community_features",
    "connected_components",
    "detect",
    "from_edge_pairs",
    "generalized_modularity",
    "generate",
    "giant_component",
    "load_edge_list",
    "load_partition_csv",
    "loads_edge_list",
    "modularity",
    "move_gain_degree_tax",
    "move_gain_edge_contribution",
    "oriented_rank_auc",
    "rank_auc",
    "regularized_modularity",
    "save_partition_csv",
    "__version__",
]
