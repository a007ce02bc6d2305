"""Synthetic graphs for tests and benchmarks."""
from __future__ import annotations

import numpy as np

from .graph import Graph


def random_digraph(n: int, arc_count: int, seed: int, w_min: int = 1, w_max: int = 100) -> Graph:
    """Uniform random arcs (parallel arcs allowed, no self-loops)."""
    rng = np.random.default_rng(seed)
    if n < 2:
        return Graph(n, [], [], [])
    tails = rng.integers(0, n, arc_count)
    heads = rng.integers(0, n - 1, arc_count)
    heads = np.where(heads >= tails, heads + 1, heads)
    weights = rng.integers(w_min, w_max, arc_count, endpoint=True)
    return Graph(n, tails, heads, weights)


def grid_road_network(rows: int, cols: int, seed: int, arterial_every: int = 8,
                      one_way_fraction: float = 0.05) -> Graph:
    """Grid street map with faster arterial rows/columns and a few one-way streets.

    Weights are travel times in ms; the two directions of a street get independent
    weights, so the graph is genuinely directed.
    """
    rng = np.random.default_rng(seed)
    idx = np.arange(rows * cols).reshape(rows, cols)
    pairs = []
    fast = []
    for r in range(rows):
        u = idx[r, :-1]
        v = idx[r, 1:]
        pairs.append(np.stack([u, v], 1))
        fast.append(np.full(u.size, r % arterial_every == 0))
    for c in range(cols):
        u = idx[:-1, c]
        v = idx[1:, c]
        pairs.append(np.stack([u, v], 1))
        fast.append(np.full(u.size, c % arterial_every == 0))
    pairs = np.concatenate(pairs)
    fast = np.concatenate(fast)
    k = pairs.shape[0]
    # seconds per block: arterials ~ 8-14 s, streets ~ 25-60 s
    base_lo = np.where(fast, 8_000, 25_000)
    base_hi = np.where(fast, 14_000, 60_000)
    w_fw = rng.integers(base_lo, base_hi)
    w_bw = rng.integers(base_lo, base_hi)
    one_way = (~fast) & (rng.random(k) < one_way_fraction)
    flip = rng.random(k) < 0.5
    keep_fw = ~(one_way & flip)
    keep_bw = ~(one_way & ~flip)
    tails = np.concatenate([pairs[keep_fw, 0], pairs[keep_bw, 1]])
    heads = np.concatenate([pairs[keep_fw, 1], pairs[keep_bw, 0]])
    weights = np.concatenate([w_fw[keep_fw], w_bw[keep_bw]])
    order = rng.permutation(tails.size)
    return Graph(rows * cols, tails[order], heads[order], weights[order])
