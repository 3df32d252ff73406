"""Public package interface for the matching-guided vertex cover solver."""

__version__ = "0.1.0"

from .graph import (
    BfsLevels,
    Graph,
    GraphParseError,
    RawMultigraph,
    bfs_levels,
    components,
    is_vertex_cover,
    normalize,
    parse_graph,
    read_graph,
    to_dimacs,
    to_edgelist,
    validate_simple_connected,
)
from .harness import (
    Classification,
    Counterexample,
    DifferentialRunner,
    RunMode,
    RunReport,
    differential_run,
    enumerate_connected,
    gen_random_connected,
)
from .local_minimization import LocalMinimizationError, freeze_and_remove, local_minimization
from .matching import Matching, is_matching, maximum_matching, perturbed_maximum_matching
from .maximal_matching import (
    LevelInvariantError,
    RepresentsRow,
    RepresentsTable,
    guided_maximal_matching,
    matched_edges,
)
from .oracle import (
    OracleLimitError,
    exact_max_matching_exhaustive,
    exact_mvc,
    exact_mvc_exhaustive,
)
from .reductions import (
    DiReInstance,
    NormalizedVc2Instance,
    dire_feasible_bruteforce,
    dire_to_vc,
    to_simple_connected,
    vc_to_dire,
)
from .solver import CoverResult, SolverConfig, TraceEvent, decide, replay_trace, solve, trace

__all__ = [
    "BfsLevels",
    "Classification",
    "Counterexample",
    "CoverResult",
    "DiReInstance",
    "DifferentialRunner",
    "Graph",
    "GraphParseError",
    "LevelInvariantError",
    "LocalMinimizationError",
    "Matching",
    "NormalizedVc2Instance",
    "OracleLimitError",
    "RawMultigraph",
    "RepresentsRow",
    "RepresentsTable",
    "RunMode",
    "RunReport",
    "SolverConfig",
    "TraceEvent",
    "bfs_levels",
    "components",
    "decide",
    "differential_run",
    "dire_feasible_bruteforce",
    "dire_to_vc",
    "enumerate_connected",
    "exact_max_matching_exhaustive",
    "exact_mvc",
    "exact_mvc_exhaustive",
    "freeze_and_remove",
    "gen_random_connected",
    "guided_maximal_matching",
    "is_matching",
    "is_vertex_cover",
    "local_minimization",
    "matched_edges",
    "maximum_matching",
    "normalize",
    "parse_graph",
    "perturbed_maximum_matching",
    "read_graph",
    "replay_trace",
    "solve",
    "to_dimacs",
    "to_edgelist",
    "to_simple_connected",
    "trace",
    "validate_simple_connected",
    "vc_to_dire",
]
