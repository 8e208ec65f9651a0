"""Vertex orderings: LLP, Leiden, Leiden+LLP and their diagnostics."""
from .diagnostics import OrderingReport, gap1_fraction, gap_entropy, ordering_diagnostics
from .leiden import LeidenConfig, leiden_partition, modularity
from .llp import LlpConfig, llp_order
from .permio import read_permutation, write_permutation
from .pipeline import cluster_sequence, leiden_llp_order, segment_bounds

__all__ = [
    "LlpConfig", "LeidenConfig", "llp_order", "leiden_partition", "modularity",
    "leiden_llp_order", "cluster_sequence", "segment_bounds",
    "ordering_diagnostics", "OrderingReport", "gap_entropy", "gap1_fraction",
    "read_permutation", "write_permutation",
]
