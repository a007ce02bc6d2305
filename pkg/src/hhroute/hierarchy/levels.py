"""Per-level steps of hierarchy construction: core extraction, radii, lifting, contraction."""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from ..graph import INF
from . import kernels


@dataclass(frozen=True)
class ContractionPolicy:
    """Which level nodes get bypassed.

    A node is bypassable when its in/out degree (distinct neighbours in the level
    graph) are within ``max_in``/``max_out`` and the in*out shortcuts it would
    need do not exceed in + out + ``extra``.
    """

    max_in: int = 4
    max_out: int = 4
    extra: int = 2
    withdraw_cycles: bool = False

    def bypassable(self, d_in: int, d_out: int) -> bool:
        return d_in <= self.max_in and d_out <= self.max_out and d_in * d_out <= d_in + d_out + self.extra


NO_CONTRACTION = ContractionPolicy(max_in=-1, max_out=-1, extra=0)


@dataclass
class CoreView:
    """A level core as global-id CSR over a subset of arcs."""

    nodes: np.ndarray
    arcs: np.ndarray
    out_ptr: np.ndarray
    out_arc: np.ndarray
    in_ptr: np.ndarray
    in_arc: np.ndarray
    tails: np.ndarray
    heads: np.ndarray
    packed: np.ndarray

    @classmethod
    def build(cls, n, node_mask, arc_ids, tails, heads, packed):
        arc_ids = np.asarray(arc_ids, dtype=np.int64)
        t = tails[arc_ids]
        h = heads[arc_ids]
        o = np.lexsort((arc_ids, t))
        out_arc = arc_ids[o]
        out_ptr = np.zeros(n + 1, np.int64)
        np.cumsum(np.bincount(t, minlength=n), out=out_ptr[1:])
        i = np.lexsort((arc_ids, h))
        in_arc = arc_ids[i]
        in_ptr = np.zeros(n + 1, np.int64)
        np.cumsum(np.bincount(h, minlength=n), out=in_ptr[1:])
        nodes = np.flatnonzero(node_mask).astype(np.int64)
        return cls(nodes, arc_ids, out_ptr, out_arc, in_ptr, in_arc, tails, heads, packed)

    @classmethod
    def from_graph(cls, g) -> "CoreView":
        """Level-0 core: the whole graph."""
        n = g.node_count
        return cls.build(n, np.ones(n, bool), np.arange(g.arc_count), g.tails, g.heads, g.packed_weights)

    def reversed(self) -> "CoreView":
        return CoreView(self.nodes, self.arcs, self.in_ptr, self.in_arc, self.out_ptr, self.out_arc,
                        self.heads, self.tails, self.packed)


@dataclass
class Neighbourhoods:
    """Radii and explicit member sets for one level and one direction."""

    radius: np.ndarray  # packed, INF where fewer than H nodes reachable; INF off-core
    slot: np.ndarray  # node -> row in mem_ptr, -1 off-core
    mem_ptr: np.ndarray
    members: np.ndarray
    member_dist: np.ndarray

    def members_of(self, v: int) -> np.ndarray:
        s = self.slot[v]
        return self.members[self.mem_ptr[s]:self.mem_ptr[s + 1]]

    def contains(self, v: int, x: int) -> bool:
        return bool(np.isin(x, self.members_of(v)))


def compute_neighbourhoods(core: CoreView, n: int, H: int) -> Neighbourhoods:
    if H < 1:
        raise ValueError("H must be at least 1")
    radius = np.full(n, INF, np.int64)
    mem_ptr, mem, mem_d = kernels.neighbourhoods_kernel(
        core.nodes, core.out_ptr, core.out_arc, core.heads, core.packed, H, radius)
    slot = np.full(n, -1, np.int64)
    slot[core.nodes] = np.arange(core.nodes.size)
    return Neighbourhoods(radius, slot, mem_ptr, mem, mem_d)


@dataclass
class PartialTree:
    """B(root): settled nodes in order, parents, packed distances, final status."""

    root: int
    order: np.ndarray
    dist: dict
    parent_node: dict
    parent_arc: dict
    active: dict
    reached_unsettled: list = field(default_factory=list)

    def leaves(self) -> list[int]:
        parents = {self.parent_node[v] for v in self.order if v != self.root}
        return [int(v) for v in self.order if v != self.root and v not in parents]

    def path_arcs(self, v: int) -> list[int]:
        arcs = []
        while v != self.root:
            arcs.append(self.parent_arc[v])
            v = self.parent_node[v]
        return arcs[::-1]


class _Workspace:
    def __init__(self, n, arc_total):
        self.dist = np.full(n, INF, np.int64)
        self.state = np.zeros(n, np.int8)
        self.pnode = np.full(n, -1, np.int64)
        self.parc = np.full(n, -1, np.int64)
        self.active = np.zeros(n, np.int8)
        self.first = np.full(n, -1, np.int64)
        self.heap = np.empty(max(n, 1), np.int64)
        self.pos = np.full(max(n, 1), -1, np.int64)
        self.touched = np.empty(max(n, 1), np.int64)
        self.order = np.empty(max(n, 1), np.int64)
        self.haschild = np.zeros(n, np.int8)
        self.delta = np.full(n, INF, np.int64)
        self.stamp = np.full(max(arc_total, 1), -1, np.int64)
        self.out = np.empty(max(n, 1), np.int64)


PASSIVE_DIRECTED = "directed"
PASSIVE_FORWARD = "forward"


def passive_operands(fwd: Neighbourhoods, rev: Neighbourhoods, rule: str = PASSIVE_DIRECTED):
    """(other-side neighbourhoods, guard radii) for the passivity test.

    ``directed``: x turns passive when it lies outside the forward neighbourhood of
    s1 and that neighbourhood shares at most one node with the reverse
    neighbourhood of x. ``forward`` intersects two forward neighbourhoods with no
    guard; it is kept for comparison only since it can cut trees before a highway
    arc is reached, which makes static queries inexact.
    """
    if rule == PASSIVE_DIRECTED:
        return rev, fwd.radius
    if rule == PASSIVE_FORWARD:
        return fwd, np.full(fwd.radius.shape, -1, np.int64)
    raise ValueError(f"unknown passivity rule {rule!r}")


def build_partial_spt(core: CoreView, fwd: Neighbourhoods, rev: Neighbourhoods, root: int, n: int,
                      _ws: _Workspace | None = None, passive: str = PASSIVE_DIRECTED) -> PartialTree:
    ws = _ws or _Workspace(n, int(core.tails.size))
    other, guard = passive_operands(fwd, rev, passive)
    ns, nt = kernels.partial_spt_kernel(
        root, core.out_ptr, core.out_arc, core.heads, core.packed, fwd.slot, fwd.mem_ptr, fwd.members,
        other.slot, other.mem_ptr, other.members, guard, ws.dist, ws.state, ws.pnode, ws.parc, ws.active, ws.first, ws.heap, ws.pos, ws.touched, ws.order)
    order = ws.order[:ns].copy()
    touched = ws.touched[:nt]
    tree = PartialTree(
        root=int(root),
        order=order,
        dist={int(v): int(ws.dist[v]) for v in touched},
        parent_node={int(v): int(ws.pnode[v]) for v in touched},
        parent_arc={int(v): int(ws.parc[v]) for v in touched},
        active={int(v): bool(ws.active[v]) for v in touched},
        reached_unsettled=[int(v) for v in touched if ws.state[v] == 1],
    )
    if _ws is None:
        kernels.reset_workspace(nt, ws.touched, ws.dist, ws.state, ws.pos, ws.active)
    tree._ws = (ws, ns, nt)
    return tree


def lift_tree(tree: PartialTree, fwd: Neighbourhoods, leaf_radius: np.ndarray, mode: int) -> set[int]:
    """Arc ids lifted from ``tree`` under one of the lifting rules in :mod:`kernels`."""
    ws, ns, nt = tree._ws
    n = leaf_radius.shape[0]
    order = tree.order
    dist = np.full(n, INF, np.int64)
    pnode = np.full(n, -1, np.int64)
    parc = np.full(n, -1, np.int64)
    for v in order:
        dist[v] = tree.dist[int(v)]
        pnode[v] = tree.parent_node[int(v)]
        parc[v] = tree.parent_arc[int(v)]
    k = kernels.lift_kernel(tree.root, ns, order, dist, pnode, parc, fwd.radius[tree.root],
                            leaf_radius, mode, ws.haschild, ws.delta, ws.stamp, ws.out)
    lifted = {int(a) for a in ws.out[:k]}
    ws.stamp[:] = -1
    return lifted


def lift_arcs_direct(tree, fwd: Neighbourhoods, rev: Neighbourhoods) -> set[int]:
    """Leaf-to-root walk: (u, w) lifted when u is outside the leaf's reverse
    neighbourhood and w is outside the root's forward neighbourhood."""
    return lift_tree(tree, fwd, rev.radius, kernels.LIFT_DIRECT)


def lift_arcs_slack(tree, fwd: Neighbourhoods, rev: Neighbourhoods) -> set[int]:
    """Slack propagation with leaves seeded by their reverse radius."""
    return lift_tree(tree, fwd, rev.radius, kernels.LIFT_SLACK)


def lift_arcs_slack_forward(tree, fwd: Neighbourhoods) -> set[int]:
    """Slack propagation seeded with forward radii (only valid on symmetric graphs)."""
    return lift_tree(tree, fwd, fwd.radius, kernels.LIFT_SLACK_FORWARD)


def lift_level(core: CoreView, fwd: Neighbourhoods, rev: Neighbourhoods, mode=kernels.LIFT_SLACK,
               passive: str = PASSIVE_DIRECTED):
    """Union of lifted arcs over all core roots (ascending id); returns (mask, tree work)."""
    other, guard = passive_operands(fwd, rev, passive)
    arc_total = int(core.tails.size)
    lifted = np.zeros(arc_total, np.int8)
    leaf_radius = fwd.radius if mode == kernels.LIFT_SLACK_FORWARD else rev.radius
    work = kernels.lift_level_kernel(core.nodes, core.out_ptr, core.out_arc, core.heads, core.packed,
                                     fwd.slot, fwd.mem_ptr, fwd.members,
                                     other.slot, other.mem_ptr, other.members, guard,
                                     fwd.radius, leaf_radius,
                                     mode, arc_total, lifted)
    return lifted.astype(bool), int(work)


@dataclass
class Contraction:
    core_nodes: np.ndarray
    bypassed: np.ndarray
    # new shortcut arcs: (tail, head, packed weight, constituent arc ids at this level)
    shortcuts: list


def select_bypassable(nodes: np.ndarray, tails, heads, arc_ids, policy: ContractionPolicy) -> np.ndarray:
    ins: dict[int, set] = {int(v): set() for v in nodes}
    outs: dict[int, set] = {int(v): set() for v in nodes}
    for a in arc_ids:
        u, v = int(tails[a]), int(heads[a])
        outs[u].add(v)
        ins[v].add(u)
    chosen = [v for v in sorted(ins) if policy.bypassable(len(ins[v]), len(outs[v]))]
    chosen = np.asarray(chosen, dtype=np.int64)
    if policy.withdraw_cycles and chosen.size:
        chosen = _withdraw_cycles(chosen, outs)
    return chosen


def _withdraw_cycles(chosen: np.ndarray, outs) -> np.ndarray:
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components

    keep = set(int(v) for v in chosen)
    while True:
        idx = {v: i for i, v in enumerate(sorted(keep))}
        rows, cols = [], []
        for v in idx:
            for x in outs[v]:
                if x in idx:
                    rows.append(idx[v])
                    cols.append(idx[x])
        k = len(idx)
        mat = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(k, k))
        _, labels = connected_components(mat, directed=True, connection="strong")
        sizes = np.bincount(labels, minlength=1) if k else np.zeros(0, int)
        cyclic = [lab for lab in range(sizes.size) if sizes[lab] > 1]
        if not cyclic:
            return np.asarray(sorted(keep), dtype=np.int64)
        ordered = sorted(idx)
        for lab in cyclic:
            members = [ordered[i] for i in np.flatnonzero(labels == lab)]
            keep.discard(min(members))


def contract_level(nodes: np.ndarray, arc_ids: np.ndarray, tails, heads, packed,
                   policy: ContractionPolicy, bypassed=None) -> Contraction:
    """Bypass low-degree nodes of a level graph and add min-cost shortcuts between
    the remaining nodes for every path whose interior is entirely bypassed.

    ``bypassed`` overrides the policy's choice of nodes.
    """
    nodes = np.asarray(nodes, dtype=np.int64)
    arc_ids = np.asarray(arc_ids, dtype=np.int64)
    if bypassed is None:
        bypassed = select_bypassable(nodes, tails, heads, arc_ids, policy)
    bypassed = np.asarray(sorted(int(v) for v in bypassed), dtype=np.int64)
    if bypassed.size == 0:
        return Contraction(nodes, bypassed, [])
    is_bypassed = set(bypassed.tolist())
    out: dict[int, list] = {}
    for a in arc_ids:
        out.setdefault(int(tails[a]), []).append(int(a))
    direct: dict[tuple, int] = {}
    for a in arc_ids:
        key = (int(tails[a]), int(heads[a]))
        if int(tails[a]) not in is_bypassed and int(heads[a]) not in is_bypassed:
            direct[key] = min(direct.get(key, INF), int(packed[a]))

    shortcuts = []
    starts = sorted({int(tails[a]) for a in arc_ids if int(tails[a]) not in is_bypassed
                     and int(heads[a]) in is_bypassed})
    for s in starts:
        # Dijkstra whose interior is restricted to bypassed nodes
        dist = {s: 0}
        parent = {}
        done = set()
        heap = [(0, s)]
        ends = []
        while heap:
            d, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            if u != s and u not in is_bypassed:
                ends.append(u)
                continue
            for a in out.get(u, ()):
                v = int(heads[a])
                if u == s and v not in is_bypassed:
                    continue
                nd = d + int(packed[a])
                if nd < dist.get(v, INF):
                    dist[v] = nd
                    parent[v] = a
                    heapq.heappush(heap, (nd, v))
        for t in sorted(ends):
            if t == s or dist[t] >= direct.get((s, t), INF):
                continue
            chain = []
            x = t
            while x != s:
                a = parent[x]
                chain.append(a)
                x = int(tails[a])
            shortcuts.append((s, t, dist[t], chain[::-1]))
    core = np.asarray([v for v in nodes.tolist() if v not in is_bypassed], dtype=np.int64)
    return Contraction(core, bypassed, shortcuts)
