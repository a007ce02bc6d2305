"""Directed highway hierarchies with point-to-point queries under dynamic arc weights."""
from .graph import Graph, GraphError, GraphFormatError, parse_graph, read_graph, write_graph
from .hierarchy import ContractionPolicy, HighwayHierarchy, build_hierarchy
from .oracle import dijkstra_p2p, dijkstra_sssp
from .overlay import WeightOverlay, WeightUpdateBatch, apply_batch, dynamic_weight, sample_random_weights
from .query import query, query_naive, unpack_path
from .result import NoPath, QueryResult, SearchStats
from .serialize import deserialize_hierarchy, read_hierarchy, serialize_hierarchy, write_hierarchy

__version__ = "0.1.0"

__all__ = [
    "ContractionPolicy", "Graph", "GraphError", "GraphFormatError", "HighwayHierarchy", "NoPath",
    "QueryResult", "SearchStats", "WeightOverlay", "WeightUpdateBatch", "apply_batch",
    "build_hierarchy", "deserialize_hierarchy", "dijkstra_p2p", "dijkstra_sssp", "dynamic_weight",
    "parse_graph", "query", "query_naive", "read_graph", "read_hierarchy", "sample_random_weights",
    "serialize_hierarchy", "unpack_path", "write_graph", "write_hierarchy",
]
