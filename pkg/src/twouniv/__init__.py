"""Spanning embeddings of max-degree-2 graphs into dense graphs perturbed by random edges."""

from .decompose import Decomposition, DecompositionInfeasible, check_partition_props, decompose, edge_partition_audit
from .graph import Graph, distance, induced_subgraph, union
from .harness import SweepConfig, TrialConfig, TrialRecord, run_trial, sweep
from .instances import (
    CycleTypeSpec,
    ParamSet,
    augment_to_maximal,
    build_f_graph,
    enumerate_specs,
    format_spec,
    make_bipartite_host,
    parse_spec,
    random_spec,
    sample_gnp,
)
from .oracle import oracle_embed, verify_embedding, verify_family_membership
from .pipeline import EmbedResult, FailureReport, embed_full
from .rng import derive_seed, make_rng

__version__ = "0.1.0"

__all__ = [
    "CycleTypeSpec", "Decomposition", "DecompositionInfeasible", "EmbedResult", "FailureReport", "Graph",
    "ParamSet", "SweepConfig", "TrialConfig", "TrialRecord",
    "augment_to_maximal", "build_f_graph", "check_partition_props", "decompose", "derive_seed", "distance",
    "edge_partition_audit", "embed_full", "enumerate_specs", "format_spec", "induced_subgraph",
    "make_bipartite_host", "make_rng", "oracle_embed", "parse_spec", "random_spec", "run_trial",
    "sample_gnp", "sweep", "union", "verify_embedding", "verify_family_membership",
]
