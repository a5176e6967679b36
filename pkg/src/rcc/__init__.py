"""Relative clustering coefficient and classical clustering metrics."""

from .capacity import (AffiliationBipartite, CapacityMask, capacity_from_affiliation,
                       complete_mask, full_graph, validate_against)
from .graph import Graph, Neighborhood, build_graph, neighbors, wedge_count_at
from .harness import (ExperimentConfig, expected_allowed_counts, oracle_census, run_replicate,
                      run_sweep)
from .metrics import (TriangleCensus, average_local_clustering, global_clustering,
                      local_clustering, relative_clustering, relative_local_clustering,
                      triangle_census)
from .model import ModelParams, sample_affiliation, sample_network

__version__ = "0.1.0"
