from pathlib import Path

import numpy as np
import pytest

from hhroute.graph import INF, Graph, read_graph

DATA = Path(__file__).parent / "data"


def load(name: str) -> Graph:
    return read_graph(DATA / name)


@pytest.fixture
def ex1() -> Graph:
    return load("example1.txt")


def random_graph(seed: int, n: int, m: int, w_max: int = 100) -> Graph:
    rng = np.random.default_rng(seed)
    t = rng.integers(0, n, m)
    h = rng.integers(0, n, m)
    keep = t != h
    return Graph(n, t[keep], h[keep], rng.integers(1, w_max + 1, int(keep.sum())))


def bellman_ford(n, tails, heads, weights, root):
    """Distances by edge relaxation to a fixpoint; INF where unreachable."""
    dist = [INF] * n
    dist[root] = 0
    for _ in range(n):
        changed = False
        for u, v, w in zip(tails.tolist(), heads.tolist(), np.asarray(weights).tolist()):
            if dist[u] < INF and dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
        if not changed:
            break
    return dist


def all_pairs(g: Graph, packed=True, reverse=False):
    w = g.packed_weights if packed else g.weights
    t, h = (g.heads, g.tails) if reverse else (g.tails, g.heads)
    return [bellman_ford(g.node_count, t, h, w, s) for s in range(g.node_count)]


def brute_neighbourhood(dist_row, H):
    """(radius, members) of an H-neighbourhood from one row of packed distances."""
    reach = sorted(d for d in dist_row if d < INF)
    radius = reach[H - 1] if len(reach) >= H else INF
    return radius, {v for v, d in enumerate(dist_row) if d < INF and d <= radius}
