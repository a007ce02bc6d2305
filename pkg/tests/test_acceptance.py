"""Acceptance suite: one PASS/FAIL line per criterion, printed at the end of the module.

Run alone with ``python3 -m pytest tests/test_acceptance.py -v`` (or ``python3 tests/test_acceptance.py``).
Tolerances are pinned in the constants below.
"""
import subprocess
import sys
import time

import numpy as np
import pytest

from hhroute.bench import run_bench
from hhroute.graph import INF, write_graph
from hhroute.hierarchy import (
    CoreView,
    build_hierarchy,
    build_partial_spt,
    compute_neighbourhoods,
    lift_arcs_direct,
    lift_arcs_slack,
    lift_arcs_slack_forward,
)
from hhroute.oracle import dijkstra_p2p, dijkstra_sssp
from hhroute.overlay import dynamic_weight, random_overlay
from hhroute.query import query
from hhroute.synth import grid_road_network

from conftest import load, random_graph

EXAMPLE_SECONDS = 1.0
EQUIVALENCE_GRAPHS = 200
EQUIVALENCE_MAX_NODES = 200
EQUIVALENCE_SECONDS = 60.0
SLACK_GRAPHS = 50
EXACT_PAIRS = 1000
EXACT_MIN_NODES = 10_000
EXACT_SECONDS = 120.0
SPEEDUP_MAX_RATIO = 0.20
SPEEDUP_MIN_LEVELS = 3
DYNAMIC_QUERIES = 500
GRID = dict(rows=100, cols=100, seed=7, H=30, L=4)

RESULTS = {}


def verdict(n, ok, detail):
    RESULTS[n] = (bool(ok), detail)
    assert ok, detail


@pytest.fixture(scope="module", autouse=True)
def report(request):
    yield
    tr = request.config.pluginmanager.get_plugin("terminalreporter")
    lines = []
    for n in range(1, 11):
        ok, detail = RESULTS.get(n, (False, "did not complete"))
        lines.append(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    text = "\n".join(["", "acceptance summary", *lines])
    if tr is not None:
        tr.write_line(text)
    else:
        print(text)


def level0(g, H):
    core = CoreView.from_graph(g)
    n = g.node_count
    return core, compute_neighbourhoods(core, n, H), compute_neighbourhoods(core.reversed(), n, H)


@pytest.fixture(scope="module")
def warm():
    # load or compile the kernels once so timed sections measure the algorithms
    g = load("counterexample.txt")
    core, fwd, rev = level0(g, 2)
    tree = build_partial_spt(core, fwd, rev, 2, g.node_count)
    lift_arcs_direct(tree, fwd, rev)
    lift_arcs_slack(tree, fwd, rev)
    lift_arcs_slack_forward(tree, fwd)
    h = build_hierarchy(g, 2, 1)
    query(h, random_overlay(g, 0), 2, 1)
    dijkstra_p2p(g, None, 2, 1)
    dijkstra_sssp(g, None, 2)
    return True


@pytest.fixture(scope="module")
def big(warm):
    g = grid_road_network(GRID["rows"], GRID["cols"], GRID["seed"])
    t0 = time.perf_counter()
    h = build_hierarchy(g, GRID["H"], GRID["L"])
    return g, h, time.perf_counter() - t0


HIERARCHIES = []


def test_criterion_01_example(warm):
    t0 = time.perf_counter()
    g = load("example1.txt")
    core, fwd, rev = level0(g, 3)
    table = {v: set(fwd.members_of(v).tolist()) for v in range(7)}
    table_ok = (all(table[v] == {0, 1, 2} for v in (0, 1, 2))
                and all(table[v] == {3, 4, 5} for v in (3, 4, 5)) and table[6] == {3, 5, 6})
    tree = build_partial_spt(core, fwd, rev, 0, 7)
    pairs = lambda ids: {(int(g.tails[a]), int(g.heads[a])) for a in ids}  # noqa: E731
    direct = pairs(lift_arcs_direct(tree, fwd, rev))
    slack = pairs(lift_arcs_slack(tree, fwd, rev))
    h = build_hierarchy(g, 3, 1)
    HIERARCHIES.append(h)
    elapsed = time.perf_counter() - t0
    want = {(2, 4), (1, 6)}
    full = sorted(pairs(np.flatnonzero(h.arc_level[:g.arc_count] >= 1)))
    verdict(1, table_ok and direct == want and slack == want and elapsed < EXAMPLE_SECONDS,
            f"B(v0) lifts {sorted(direct)} (slack {sorted(slack)}), table ok={table_ok}, "
            f"{elapsed:.3f}s; full L=1 build lifts {full}")


def test_criterion_02_slack_equals_direct(warm):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    roots = disagreements = 0
    for i in range(EQUIVALENCE_GRAPHS):
        n = int(rng.integers(2, EQUIVALENCE_MAX_NODES + 1))
        g = random_graph(10_000 + i, n, int(rng.integers(n, 4 * n + 1)), w_max=100)
        H = int(rng.integers(1, 11))
        core, fwd, rev = level0(g, H)
        for root in range(n):
            tree = build_partial_spt(core, fwd, rev, root, n)
            roots += 1
            disagreements += lift_arcs_slack(tree, fwd, rev) != lift_arcs_direct(tree, fwd, rev)
    elapsed = time.perf_counter() - t0
    verdict(2, disagreements == 0 and elapsed < EQUIVALENCE_SECONDS,
            f"{EQUIVALENCE_GRAPHS} graphs, {roots} roots, {disagreements} disagreements, {elapsed:.1f}s")


def test_criterion_03_counterexample(warm):
    found = []
    for name, H, root in (("counterexample.txt", 2, 2), ("example1.txt", 3, 0)):
        g = load(name)
        core, fwd, rev = level0(g, H)
        tree = build_partial_spt(core, fwd, rev, root, g.node_count)
        direct = lift_arcs_direct(tree, fwd, rev)
        undirected = lift_arcs_slack_forward(tree, fwd)
        if direct != undirected:
            found.append(f"{name} root {root}: direct {sorted(direct)} vs forward-radius slack {sorted(undirected)}")
    verdict(3, bool(found), "; ".join(found) or "no disagreement")


def test_criterion_04_leaf_slack(warm):
    rng = np.random.default_rng(4)
    checked = violations = 0
    for i in range(SLACK_GRAPHS):
        n = int(rng.integers(10, 80))
        g = random_graph(20_000 + i, n, 3 * n)
        H = int(rng.integers(2, 8))
        core, fwd, rev = level0(g, H)
        to_t = {}
        for s in rng.choice(n, min(n, 8), replace=False):
            tree = build_partial_spt(core, fwd, rev, int(s), n)
            for t in tree.leaves():
                if t not in to_t:
                    to_t[t] = dijkstra_sssp(g.reverse_view(), None, t).packed_dist
                members = set(rev.members_of(t).tolist())
                for u in range(n):
                    d = to_t[t][u]
                    if u in members or d >= INF:
                        continue
                    checked += 1
                    violations += not (rev.radius[t] - d < 0)
    verdict(4, violations == 0 and checked > 0,
            f"{SLACK_GRAPHS} graphs, {checked} (s, leaf t, u) triples, {violations} violations")


@pytest.fixture(scope="module")
def exact_run(big):
    g, h, build_s = big
    rng = np.random.default_rng(5)
    pairs = rng.integers(0, g.node_count, (EXACT_PAIRS, 2))
    t0 = time.perf_counter()
    rows = []
    for s, t in pairs:
        a = query(h, None, int(s), int(t))
        b = dijkstra_p2p(g, None, int(s), int(t))
        rows.append((a.cost, b.cost, a.stats.settled, b.stats.settled))
    return rows, build_s + time.perf_counter() - t0


def test_criterion_05_static_exactness(big, exact_run):
    g, h, _ = big
    HIERARCHIES.append(h)
    rows, elapsed = exact_run
    bad = sum(a != b for a, b, _, _ in rows)
    verdict(5, g.node_count >= EXACT_MIN_NODES and bad == 0 and elapsed < EXACT_SECONDS,
            f"{len(rows)} pairs on {g.node_count} nodes, {bad} mismatches, {elapsed:.1f}s incl. build")


def test_criterion_06_speedup(big, exact_run):
    g, h, _ = big
    rows, _ = exact_run
    dist = np.array([r[1] for r in rows], dtype=float)
    top = dist >= np.quantile(dist, 0.75)
    hh = np.mean([r[2] for r, k in zip(rows, top) if k])
    ora = np.mean([r[3] for r, k in zip(rows, top) if k])
    cores = [r.core_nodes for r in h.level_table()]
    shrink = all(a > b for a, b in zip(cores, cores[1:]))
    verdict(6, h.L >= SPEEDUP_MIN_LEVELS and hh <= SPEEDUP_MAX_RATIO * ora and shrink,
            f"top quartile: hh settled {hh:.0f} vs oracle {ora:.0f} (ratio {hh / ora:.3f}); "
            f"core sizes {cores}")


def test_criterion_07_heuristic_quality(big):
    g, h, _ = big
    rep = run_bench(h, DYNAMIC_QUERIES, seed=7, min_factor=1, max_factor=15)
    below = sum(r.costs[k] < r.costs["oracle"] for r in rep.records for k in ("hh-heuristic", "hh-naive"))
    heur, naive = rep.summary("hh-heuristic"), rep.summary("hh-naive")
    verdict(7, below == 0 and len(rep.records) == DYNAMIC_QUERIES and heur.error_mean <= naive.error_mean,
            f"{len(rep.records)} queries, {below} below optimum; mean error heuristic "
            f"{heur.error_mean:.2f}% (var {heur.error_var:.2f}, max {heur.error_max:.2f}) vs naive "
            f"{naive.error_mean:.2f}% (var {naive.error_var:.2f}, max {naive.error_max:.2f})")


def test_criterion_08_shortcut_conservation(warm):
    hs = list(HIERARCHIES)
    for seed in range(3):
        hs.append(build_hierarchy(grid_road_network(30, 30, seed), 10, 3))
        hs.append(build_hierarchy(random_graph(seed, 300, 1000), 5, 3))
    HIERARCHIES.extend(hs[len(HIERARCHIES):])
    checked = bad = 0
    for h in hs:
        g = h.graph
        ov = random_overlay(g, 99)
        for a in range(h.original_arc_count, h.arc_count):
            exp = h.expansion(a)
            checked += 1
            ok = (int(g.weights[exp].sum()) == int(h.weights[a])
                  and int(g.packed_weights[exp].sum()) == int(h.packed[a])
                  and dynamic_weight(ov, a, h) == int(ov.values[exp].sum())
                  and all(h.heads[x] == h.tails[y] for x, y in zip(exp[:-1], exp[1:])))
            bad += not ok
    verdict(8, checked > 0 and bad == 0, f"{checked} shortcuts in {len(hs)} hierarchies, {bad} violations")


def test_criterion_09_determinism(tmp_path, warm):
    graph = tmp_path / "grid.txt"
    write_graph(grid_road_network(40, 40, 1), graph)
    cli = [sys.executable, "-m", "hhroute"]
    blobs, reports = [], []
    for k in range(2):
        out = tmp_path / f"h{k}.hh"
        subprocess.run(cli + ["preprocess", "--graph", str(graph), "--hh-H", "15", "--levels", "3",
                              "--out", str(out)], check=True, capture_output=True)
        blobs.append(out.read_bytes())
        rep = tmp_path / f"r{k}.txt"
        subprocess.run(cli + ["bench", "--hh", str(out), "--queries", "50", "--seed", "3",
                              "--report", str(rep)], check=True, capture_output=True)
        reports.append(rep.read_bytes())
    verdict(9, blobs[0] == blobs[1] and reports[0] == reports[1],
            f"hierarchy files identical={blobs[0] == blobs[1]} ({len(blobs[0])} bytes), "
            f"bench reports identical={reports[0] == reports[1]}")


def test_criterion_10_nesting(warm):
    bad = 0
    for h in HIERARCHIES:
        m = h.original_arc_count
        rows = h.level_table()
        for lv in range(h.L):
            bad += not set(np.flatnonzero(h.arc_level[:m] > lv)) <= set(np.flatnonzero(h.arc_level[:m] >= lv))
            bad += not set(np.flatnonzero(h.node_level > lv)) <= set(np.flatnonzero(h.node_level >= lv))
            bad += not set(np.flatnonzero(h.core_level > lv)) <= set(np.flatnonzero(h.core_level >= lv))
            a, b = rows[lv], rows[lv + 1]
            bad += not (b.highway_nodes <= a.highway_nodes and b.highway_arcs <= a.highway_arcs
                        and b.core_nodes <= a.core_nodes)
    verdict(10, bad == 0 and len(HIERARCHIES) > 0, f"{len(HIERARCHIES)} hierarchies, {bad} violations")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
