import numpy as np
import pytest

from hhroute.graph import INF, Graph, GraphError
from hhroute.oracle import dijkstra_p2p, dijkstra_sssp
from hhroute.overlay import random_overlay

from conftest import bellman_ford, random_graph


def test_example_distances(ex1):
    tree = dijkstra_sssp(ex1, None, 0)
    assert tree.dist[[1, 2, 6, 4, 3, 5]].tolist() == [1, 2, 5, 8, 9, 10]
    assert tree.order[:5].tolist() == [0, 1, 2, 6, 4]


def test_example_p2p(ex1):
    res = dijkstra_p2p(ex1, None, 0, 5)
    assert res.cost == 10
    assert res.nodes == [0, 2, 4, 5]


def test_isolated_root():
    g = Graph(3, [1], [2], [4])
    tree = dijkstra_sssp(g, None, 0)
    assert tree.dist.tolist() == [0, -1, -1]
    assert tree.path_to(0) == []
    assert tree.path_to(2) is None


def test_same_node_and_unreachable():
    g = Graph(3, [0], [1], [4])
    res = dijkstra_p2p(g, None, 2, 2)
    assert res.cost == 0 and len(res.arcs) == 0 and res.nodes == [2]
    assert not dijkstra_p2p(g, None, 1, 0).reachable


@pytest.mark.parametrize("seed", range(12))
def test_sssp_matches_bellman_ford(seed):
    g = random_graph(seed, 100, 350)
    for root in (0, 17, 99):
        tree = dijkstra_sssp(g, None, root)
        bf = bellman_ford(g.node_count, g.tails, g.heads, g.weights, root)
        expect = [d if d < INF else -1 for d in bf]
        assert tree.dist.tolist() == expect


def test_dynamic_weights_bellman_ford():
    g = random_graph(3, 80, 300)
    ov = random_overlay(g, 9)
    tree = dijkstra_sssp(g, ov, 5)
    bf = bellman_ford(g.node_count, g.tails, g.heads, ov.values, 5)
    assert tree.dist.tolist() == [d if d < INF else -1 for d in bf]


def test_bidirectional_equals_unidirectional():
    rng = np.random.default_rng(0)
    checked = 0
    for seed in range(10):
        g = random_graph(seed, 120, 400)
        trees = {}
        for _ in range(100):
            s, t = (int(x) for x in rng.integers(0, g.node_count, 2))
            tree = trees.setdefault(s, dijkstra_sssp(g, None, s))
            res = dijkstra_p2p(g, None, s, t)
            if tree.dist[t] < 0:
                assert not res.reachable
            else:
                assert res.cost == tree.dist[t]
                # the two searches agree on the canonical path, not just its cost
                assert res.arcs.tolist() == tree.path_to(t)
                assert res.stats.explored >= res.stats.settled >= 1
            checked += 1
    assert checked == 1000


def test_canonical_subpaths():
    g = random_graph(4, 25, 80, w_max=3)  # many equal-cost alternatives
    trees = [dijkstra_sssp(g, None, s) for s in range(g.node_count)]
    for s in range(g.node_count):
        for t in range(g.node_count):
            p = trees[s].path_to(t)
            if not p:
                continue
            nodes = [s] + [int(g.heads[a]) for a in p]
            for i in range(len(nodes)):
                for j in range(i + 1, len(nodes)):
                    assert trees[nodes[i]].path_to(nodes[j]) == p[i:j]


def test_negative_weights_rejected():
    g = Graph(2, [0], [1], [1])
    with pytest.raises(GraphError):
        dijkstra_sssp(g, np.array([-3]), 0)
