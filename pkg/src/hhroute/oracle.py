"""Exact reference searches: plain and bidirectional Dijkstra.

Both run on packed weights (see :mod:`hhroute.graph`), so the trees they return
are the canonical ones the hierarchy builder also uses. Residual packed ties are
broken by lower predecessor node, then lower arc id.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ._accel import kernel
from .graph import INF, Graph, GraphError
from .heap import heap_pop, heap_push, new_heap
from .result import NoPath, QueryResult, SearchStats, path_nodes

UNREACHED, REACHED, SETTLED = 0, 1, 2


@kernel
def _better_parent(cand_node, cand_arc, cur_node, cur_arc):
    return cand_node < cur_node or (cand_node == cur_node and cand_arc < cur_arc)


@kernel
def sssp_kernel(root, ptr, adj_arc, adj_other, w, dist, parent_arc, parent_node, state, order):
    """Full Dijkstra from ``root``; returns (settled, reached). Arrays are caller-initialised."""
    n = dist.shape[0]
    heap, pos = np.empty(n, np.int64), np.full(n, -1, np.int64)
    size = 0
    dist[root] = 0
    state[root] = 1
    size = heap_push(heap, pos, dist, size, root)
    settled = 0
    reached = 1
    while size > 0:
        u, size = heap_pop(heap, pos, dist, size)
        state[u] = 2
        order[settled] = u
        settled += 1
        du = dist[u]
        for i in range(ptr[u], ptr[u + 1]):
            a = adj_arc[i]
            v = adj_other[a]
            if state[v] == 2:
                continue
            nd = du + w[a]
            if state[v] == 0:
                state[v] = 1
                reached += 1
                dist[v] = nd
                parent_arc[v] = a
                parent_node[v] = u
                size = heap_push(heap, pos, dist, size, v)
            elif nd < dist[v] or (nd == dist[v] and _better_parent(u, a, parent_node[v], parent_arc[v])):
                dist[v] = nd
                parent_arc[v] = a
                parent_node[v] = u
                size = heap_push(heap, pos, dist, size, v)
    return settled, reached


@kernel
def p2p_kernel(s, t, out_ptr, out_arc, in_ptr, in_arc, tails, heads, w,
               dist_f, dist_b, par_f, par_b, pnode_f, pnode_b, state_f, state_b):
    """Bidirectional Dijkstra; returns (packed cost or INF, meeting node, settled, reached)."""
    n = dist_f.shape[0]
    hf, pf = np.empty(n, np.int64), np.full(n, -1, np.int64)
    hb, pb = np.empty(n, np.int64), np.full(n, -1, np.int64)
    dist_f[s] = 0
    dist_b[t] = 0
    state_f[s] = 1
    state_b[t] = 1
    sf = heap_push(hf, pf, dist_f, 0, s)
    sb = heap_push(hb, pb, dist_b, 0, t)
    settled = 0
    reached = 2
    mu = INF
    meet = -1
    if s == t:
        return 0, s, 0, 1
    while sf > 0 or sb > 0:
        kf = dist_f[hf[0]] if sf > 0 else INF
        kb = dist_b[hb[0]] if sb > 0 else INF
        if kf >= INF and kb >= INF:
            break
        if kf + kb >= mu:
            break
        forward = kf <= kb
        if forward:
            u, sf = heap_pop(hf, pf, dist_f, sf)
            state_f[u] = 2
            settled += 1
            du = dist_f[u]
            for i in range(out_ptr[u], out_ptr[u + 1]):
                a = out_arc[i]
                v = heads[a]
                if state_f[v] == 2:
                    continue
                nd = du + w[a]
                improved = False
                if state_f[v] == 0:
                    state_f[v] = 1
                    reached += 1
                    improved = True
                elif nd < dist_f[v] or (nd == dist_f[v] and _better_parent(u, a, pnode_f[v], par_f[v])):
                    improved = True
                if improved:
                    dist_f[v] = nd
                    par_f[v] = a
                    pnode_f[v] = u
                    sf = heap_push(hf, pf, dist_f, sf, v)
                    if state_b[v] != 0 and nd + dist_b[v] < mu:
                        mu = nd + dist_b[v]
                        meet = v
        else:
            u, sb = heap_pop(hb, pb, dist_b, sb)
            state_b[u] = 2
            settled += 1
            du = dist_b[u]
            for i in range(in_ptr[u], in_ptr[u + 1]):
                a = in_arc[i]
                v = tails[a]
                if state_b[v] == 2:
                    continue
                nd = du + w[a]
                improved = False
                if state_b[v] == 0:
                    state_b[v] = 1
                    reached += 1
                    improved = True
                elif nd < dist_b[v] or (nd == dist_b[v] and _better_parent(u, a, pnode_b[v], par_b[v])):
                    improved = True
                if improved:
                    dist_b[v] = nd
                    par_b[v] = a
                    pnode_b[v] = u
                    sb = heap_push(hb, pb, dist_b, sb, v)
                    if state_f[v] != 0 and nd + dist_f[v] < mu:
                        mu = nd + dist_f[v]
                        meet = v
    return mu, meet, settled, reached


@dataclass
class ShortestPathTree:
    root: int
    dist: np.ndarray  # real cost; -1 where unreached
    parent_arc: np.ndarray  # -1 at root and unreached nodes
    state: np.ndarray  # 0 unreached, 1 reached, 2 settled
    order: np.ndarray  # settle order
    packed_dist: np.ndarray
    stats: SearchStats

    def path_to(self, v: int) -> list[int] | None:
        """Arc ids from the root to ``v``."""
        if self.state[v] != SETTLED:
            return None
        arcs = []
        while v != self.root:
            a = int(self.parent_arc[v])
            arcs.append(a)
            v = int(self._tails[a])
        return arcs[::-1]


def resolve_weights(g: Graph, weights=None) -> tuple[np.ndarray, np.ndarray]:
    """Return (real, packed) per-arc weights for ``g`` from None, an overlay, or an array."""
    if weights is None:
        return g.weights, g.packed_weights
    values = getattr(weights, "values", weights)
    values = np.asarray(values, dtype=np.int64)
    if values.shape != (g.arc_count,):
        raise GraphError("weight vector does not match the graph's arc count")
    return values, g.pack(values)


def dijkstra_sssp(g: Graph, weights=None, root: int = 0) -> ShortestPathTree:
    if not 0 <= root < g.node_count:
        raise IndexError(f"root {root} out of range")
    _, packed = resolve_weights(g, weights)
    n = g.node_count
    dist = np.full(n, INF, dtype=np.int64)
    parent_arc = np.full(n, -1, dtype=np.int64)
    parent_node = np.full(n, -1, dtype=np.int64)
    state = np.zeros(n, dtype=np.int8)
    order = np.empty(n, dtype=np.int64)
    t0 = time.perf_counter()
    settled, reached = sssp_kernel(root, g.out_ptr, g.out_arc, g.heads, packed,
                                   dist, parent_arc, parent_node, state, order)
    elapsed = time.perf_counter() - t0
    real = np.where(dist < INF, dist >> g.shift, -1)
    tree = ShortestPathTree(root, real, parent_arc, state, order[:settled].copy(), dist,
                            SearchStats(int(settled), int(reached), elapsed))
    tree._tails = g.tails
    return tree


def dijkstra_p2p(g: Graph, weights=None, source: int = 0, target: int = 0):
    """Exact point-to-point query; returns :class:`QueryResult` or :class:`NoPath`."""
    n = g.node_count
    if not (0 <= source < n and 0 <= target < n):
        raise IndexError("source or target out of range")
    real, packed = resolve_weights(g, weights)
    dist_f = np.full(n, INF, dtype=np.int64)
    dist_b = np.full(n, INF, dtype=np.int64)
    par_f = np.full(n, -1, dtype=np.int64)
    par_b = np.full(n, -1, dtype=np.int64)
    pn_f = np.full(n, -1, dtype=np.int64)
    pn_b = np.full(n, -1, dtype=np.int64)
    st_f = np.zeros(n, dtype=np.int8)
    st_b = np.zeros(n, dtype=np.int8)
    t0 = time.perf_counter()
    mu, meet, settled, reached = p2p_kernel(source, target, g.out_ptr, g.out_arc, g.in_ptr, g.in_arc,
                                            g.tails, g.heads, packed, dist_f, dist_b, par_f, par_b,
                                            pn_f, pn_b, st_f, st_b)
    stats = SearchStats(int(settled), int(reached), time.perf_counter() - t0)
    if source == target:
        stats.settled = max(stats.settled, 1)
        return QueryResult(source, target, np.empty(0, np.int64), 0, stats, [source])
    if meet < 0 or mu >= INF:
        return NoPath(source, target, stats)
    arcs = []
    v = meet
    while v != source:
        a = int(par_f[v])
        arcs.append(a)
        v = int(g.tails[a])
    arcs.reverse()
    v = meet
    while v != target:
        a = int(par_b[v])
        arcs.append(a)
        v = int(g.heads[a])
    arcs = np.asarray(arcs, dtype=np.int64)
    cost = int(real[arcs].sum()) if arcs.size else 0
    return QueryResult(source, target, arcs, cost, stats, path_nodes(g.tails, g.heads, source, arcs))
