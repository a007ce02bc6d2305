"""Directed highway hierarchy construction."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from ..graph import INF, Graph
from . import kernels
from .levels import (
    PASSIVE_DIRECTED,
    ContractionPolicy,
    CoreView,
    compute_neighbourhoods,
    contract_level,
    lift_level,
)

log = logging.getLogger(__name__)


@dataclass
class LevelInfo:
    level: int
    highway_nodes: int
    highway_arcs: int  # original arcs whose max level >= level
    highway_shortcuts: int
    core_nodes: int
    core_arcs: int  # arcs (incl. shortcuts) of the contracted core
    shortcuts_added: int
    tree_work: int = 0
    seconds: float = 0.0


@dataclass
class HighwayHierarchy:
    graph: Graph
    H: int
    L: int
    policy: ContractionPolicy
    # every arc id: originals first, shortcuts after
    tails: np.ndarray
    heads: np.ndarray
    weights: np.ndarray  # static real weights
    packed: np.ndarray  # static packed weights
    arc_level: np.ndarray
    arc_birth: np.ndarray  # 0 for original arcs, creation level for shortcuts
    exp_ptr: np.ndarray  # shortcut k = arc m+k expands to exp_arcs[exp_ptr[k]:exp_ptr[k+1]]
    exp_arcs: np.ndarray
    node_level: np.ndarray  # max l with node in V_l
    core_level: np.ndarray  # max l with node in the contracted core V'_l
    radius_fwd: np.ndarray  # (L+1, n) packed; INF off-core and on the top level
    radius_rev: np.ndarray
    levels: list = field(default_factory=list)

    def __post_init__(self):
        n = self.graph.node_count
        self.out_ptr, self.out_arc = _csr_all(self.tails, n)
        self.in_ptr, self.in_arc = _csr_all(self.heads, n)

    @property
    def node_count(self) -> int:
        return self.graph.node_count

    @property
    def original_arc_count(self) -> int:
        return self.graph.arc_count

    @property
    def arc_count(self) -> int:
        return int(self.tails.size)

    @property
    def shortcut_count(self) -> int:
        return self.arc_count - self.original_arc_count

    @property
    def shift(self) -> int:
        return self.graph.shift

    def is_shortcut(self, a: int) -> bool:
        return a >= self.original_arc_count

    def expansion(self, a: int) -> np.ndarray:
        """Original arcs a (shortcut) arc stands for."""
        m = self.original_arc_count
        if a < m:
            return np.asarray([a], dtype=np.int64)
        k = a - m
        return self.exp_arcs[self.exp_ptr[k]:self.exp_ptr[k + 1]]

    def real_radius(self, level: int, v: int, reverse: bool = False) -> float:
        r = (self.radius_rev if reverse else self.radius_fwd)[level, v]
        return float("inf") if r >= INF else int(r) >> self.shift

    def core_arcs(self, level: int) -> np.ndarray:
        cl = self.core_level
        return np.flatnonzero((self.arc_level >= level) & (self.arc_birth <= level)
                              & (cl[self.tails] >= level) & (cl[self.heads] >= level))

    def core_view(self, level: int) -> CoreView:
        return CoreView.build(self.node_count, self.core_level >= level, self.core_arcs(level),
                              self.tails, self.heads, self.packed)

    def level_table(self) -> list[LevelInfo]:
        m = self.original_arc_count
        rows = []
        for lv in range(self.L + 1):
            info = self.levels[lv] if lv < len(self.levels) else None
            rows.append(LevelInfo(
                level=lv,
                highway_nodes=int((self.node_level >= lv).sum()),
                highway_arcs=int((self.arc_level[:m] >= lv).sum()),
                highway_shortcuts=int(((self.arc_level[m:] >= lv) & (self.arc_birth[m:] <= lv)).sum()),
                core_nodes=int((self.core_level >= lv).sum()),
                core_arcs=int(self.core_arcs(lv).size),
                shortcuts_added=info.shortcuts_added if info else 0,
                tree_work=info.tree_work if info else 0,
                seconds=info.seconds if info else 0.0,
            ))
        return rows


def _csr_all(keys, n):
    keys = np.asarray(keys, dtype=np.int64)
    order = np.argsort(keys, kind="stable").astype(np.int64)
    ptr = np.zeros(n + 1, np.int64)
    np.cumsum(np.bincount(keys, minlength=n), out=ptr[1:])
    return ptr, order


def build_hierarchy(g: Graph, H: int, L: int, policy: ContractionPolicy | None = None,
                    lift_mode: int = kernels.LIFT_SLACK,
                    passive: str = PASSIVE_DIRECTED) -> HighwayHierarchy:
    """Preprocess ``g`` into an (L+1)-level directed highway hierarchy with parameter H."""
    if H < 1:
        raise ValueError("H must be >= 1")
    if L < 0:
        raise ValueError("L must be >= 0")
    policy = policy or ContractionPolicy()
    n = g.node_count
    m = g.arc_count
    tails = [g.tails.copy()]
    heads = [g.heads.copy()]
    weights = [g.weights.copy()]
    packed = [g.packed_weights.copy()]
    arc_level = np.zeros(m, np.int64)
    arc_birth = np.zeros(m, np.int64)
    exp_ptr = [0]
    exp_arcs: list[int] = []
    node_level = np.zeros(n, np.int64)
    core_level = np.zeros(n, np.int64)
    radius_fwd = np.full((L + 1, n), INF, np.int64)
    radius_rev = np.full((L + 1, n), INF, np.int64)
    infos = []

    T = np.concatenate(tails)
    Hd = np.concatenate(heads)
    W = np.concatenate(weights)
    P = np.concatenate(packed)
    for lv in range(L):
        t0 = time.perf_counter()
        core_arcs = np.flatnonzero((arc_level >= lv) & (arc_birth <= lv)
                                   & (core_level[T] >= lv) & (core_level[Hd] >= lv))
        core = CoreView.build(n, core_level >= lv, core_arcs, T, Hd, P)
        fwd = compute_neighbourhoods(core, n, H)
        rev = compute_neighbourhoods(core.reversed(), n, H)
        radius_fwd[lv] = fwd.radius
        radius_rev[lv] = rev.radius
        lifted, work = lift_level(core, fwd, rev, lift_mode, passive)
        lifted_ids = np.flatnonzero(lifted)
        arc_level[lifted_ids] = lv + 1
        level_nodes = np.unique(np.concatenate([T[lifted_ids], Hd[lifted_ids]]))
        node_level[level_nodes] = lv + 1

        con = contract_level(level_nodes, lifted_ids, T, Hd, P, policy)
        core_level[con.core_nodes] = lv + 1
        new_t, new_h, new_w, new_p = [], [], [], []
        for s, t, pw, chain in con.shortcuts:
            new_t.append(s)
            new_h.append(t)
            new_p.append(pw)
            flat = []
            for a in chain:
                if a < m:
                    flat.append(a)
                else:
                    k = a - m
                    flat.extend(exp_arcs[exp_ptr[k]:exp_ptr[k + 1]])
            new_w.append(int(W[flat].sum()))
            exp_arcs.extend(flat)
            exp_ptr.append(len(exp_arcs))
        if new_t:
            T = np.concatenate([T, np.asarray(new_t, np.int64)])
            Hd = np.concatenate([Hd, np.asarray(new_h, np.int64)])
            W = np.concatenate([W, np.asarray(new_w, np.int64)])
            P = np.concatenate([P, np.asarray(new_p, np.int64)])
            arc_level = np.concatenate([arc_level, np.full(len(new_t), lv + 1, np.int64)])
            arc_birth = np.concatenate([arc_birth, np.full(len(new_t), lv + 1, np.int64)])
        info = LevelInfo(lv, int(core.nodes.size), 0, 0, int(core.nodes.size), int(core_arcs.size),
                         len(new_t), work, time.perf_counter() - t0)
        infos.append(info)
        log.info("level %d: core %d nodes / %d arcs, lifted %d, bypassed %d, shortcuts %d (%.2fs)",
                 lv, core.nodes.size, core_arcs.size, lifted_ids.size, con.bypassed.size,
                 len(new_t), info.seconds)

    return HighwayHierarchy(
        graph=g, H=H, L=L, policy=policy,
        tails=T, heads=Hd, weights=W, packed=P, arc_level=arc_level, arc_birth=arc_birth,
        exp_ptr=np.asarray(exp_ptr, np.int64), exp_arcs=np.asarray(exp_arcs, np.int64),
        node_level=node_level, core_level=core_level,
        radius_fwd=radius_fwd, radius_rev=radius_rev, levels=infos,
    )
