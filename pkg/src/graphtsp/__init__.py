"""Graphic TSP/TSPP approximation via the circulation pipeline, with exact audits."""

from .graph_core import Graph, Multigraph, DfsTree

__all__ = ["Graph", "Multigraph", "DfsTree"]
__version__ = "0.1.0"
