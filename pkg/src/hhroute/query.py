"""Point-to-point queries on a highway hierarchy under a dynamic weight snapshot.

Level switching always compares *static* weights against the static neighbourhood
radii; priority keys and reported costs use the snapshot's *dynamic* weights.
With a static snapshot the answer is the exact shortest path.
"""
from __future__ import annotations

import time

import numpy as np

from .graph import INF
from .hierarchy import HighwayHierarchy
from .overlay import WeightOverlay
from .query_kernel import hh_query_kernel
from .result import NoPath, QueryResult, SearchStats, path_nodes

_NO_TRACE = np.empty((0, 2), np.int64)


def _dynamic_packed(h: HighwayHierarchy, overlay: WeightOverlay | None):
    if overlay is None or overlay.values is h.graph.weights:
        return h.graph.packed_weights, True
    if overlay.graph is not h.graph and overlay.values.shape != (h.original_arc_count,):
        raise ValueError("overlay belongs to a different graph")
    return h.graph.pack(overlay.values), False


def unpack_path(h: HighwayHierarchy, arcs) -> np.ndarray:
    """Replace every shortcut by the original arcs it stands for."""
    arcs = np.asarray(arcs, dtype=np.int64)
    m = h.original_arc_count
    if arcs.size == 0 or arcs.max(initial=-1) < m:
        return arcs.copy()
    parts = [h.expansion(int(a)) for a in arcs]
    return np.concatenate(parts).astype(np.int64)


def _run(h, overlay, source, target, force_static, trace):
    n = h.node_count
    if not (0 <= source < n and 0 <= target < n):
        raise IndexError("source or target out of range")
    dyn, is_static = _dynamic_packed(h, overlay)
    use_static = force_static or is_static
    t0 = time.perf_counter()
    cost, settled, reached, packed_path, ntrace = hh_query_kernel(
        source, target, n, h.L, h.original_arc_count, h.out_ptr, h.out_arc, h.in_ptr, h.in_arc,
        h.tails, h.heads, h.packed, h.arc_level, h.arc_birth, h.core_level, h.radius_fwd, h.radius_rev,
        dyn, use_static, h.exp_ptr, h.exp_arcs, trace)
    stats = SearchStats(int(settled), int(reached), time.perf_counter() - t0)
    return cost, packed_path, stats, ntrace


def _result(h, overlay, source, target, packed_path, stats):
    arcs = unpack_path(h, packed_path)
    values = h.graph.weights if overlay is None else overlay.values
    cost = int(values[arcs].sum()) if arcs.size else 0
    nodes = path_nodes(h.graph.tails, h.graph.heads, source, arcs)
    return QueryResult(source, target, arcs, cost, stats, nodes, packed_arcs=packed_path)


def query(h: HighwayHierarchy, overlay: WeightOverlay | None, source: int, target: int,
          trace: np.ndarray | None = None):
    """Heuristic (exact when ``overlay`` is static) multi-level bidirectional query.

    ``trace``, if given, is an (k, 2) int64 array receiving settled labels and their
    parents; backward labels are stored as ``-(label + 1)``.
    """
    cost, packed_path, stats, ntrace = _run(h, overlay, source, target, False,
                                            _NO_TRACE if trace is None else trace)
    if cost >= INF:
        return NoPath(source, target, stats)
    if source == target:
        stats.settled = max(stats.settled, 1)
    return _result(h, overlay, source, target, packed_path, stats)


def query_naive(h: HighwayHierarchy, overlay: WeightOverlay | None, source: int, target: int):
    """Static-optimal path from the hierarchy, re-costed with the snapshot's weights."""
    cost, packed_path, stats, _ = _run(h, overlay, source, target, True, _NO_TRACE)
    if cost >= INF:
        return NoPath(source, target, stats)
    if source == target:
        stats.settled = max(stats.settled, 1)
    return _result(h, overlay, source, target, packed_path, stats)
