"""Compiled kernels vs. the pure-Python fallback.

Runs the same workload (build a hierarchy on a synthetic grid, then answer a batch
of static and dynamic queries plus oracle queries) in two child processes, one
with ``HHROUTE_NO_NUMBA=1``. Both runs must agree on every cost; the script prints
per-phase wall times and the speedup.

    python3 benchmarks/bench_accel.py --rows 30 --queries 50
"""
import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time
import numpy as np
from hhroute._accel import backend_name
from hhroute.synth import grid_road_network
from hhroute.hierarchy import build_hierarchy
from hhroute.query import query
from hhroute.oracle import dijkstra_p2p
from hhroute.overlay import random_overlay

rows, queries, H, L, warm = (int(x) for x in sys.argv[1:6])
g = grid_road_network(rows, rows, 11)
if warm:
    # compile (or load cached) kernels outside the timed region
    hw = build_hierarchy(grid_road_network(4, 4, 1), 2, 1)
    query(hw, None, 0, 5); dijkstra_p2p(hw.graph, None, 0, 5)
t = {}
t0 = time.perf_counter(); h = build_hierarchy(g, H, L); t["build"] = time.perf_counter() - t0
rng = np.random.default_rng(5)
pairs = rng.integers(0, g.node_count, (queries, 2))
costs = []
t0 = time.perf_counter()
for s, d in pairs:
    r = query(h, None, int(s), int(d)); costs.append(r.cost)
t["hh_static"] = time.perf_counter() - t0
ov = random_overlay(g, 3)
t0 = time.perf_counter()
for s, d in pairs:
    r = query(h, ov, int(s), int(d)); costs.append(r.cost)
t["hh_dynamic"] = time.perf_counter() - t0
t0 = time.perf_counter()
for s, d in pairs:
    r = dijkstra_p2p(g, None, int(s), int(d)); costs.append(r.cost)
t["oracle"] = time.perf_counter() - t0
print(json.dumps({"backend": backend_name(), "times": t, "costs": costs}))
"""


def run(no_numba: bool, args) -> dict:
    env = dict(os.environ)
    env["HHROUTE_NO_NUMBA"] = "1" if no_numba else "0"
    cmd = [sys.executable, "-c", WORKER, str(args.rows), str(args.queries), str(args.H), str(args.L),
           "0" if no_numba else "1"]
    out = subprocess.run(cmd, env=env, check=True, capture_output=True, text=True).stdout
    return json.loads(out.strip().splitlines()[-1])


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--rows", type=int, default=30, help="grid is rows x rows")
    p.add_argument("--queries", type=int, default=50)
    p.add_argument("--H", type=int, default=10)
    p.add_argument("--L", type=int, default=3)
    args = p.parse_args()

    t0 = time.perf_counter()
    fast = run(False, args)
    slow = run(True, args)
    if fast["costs"] != slow["costs"]:
        sys.exit("backends disagree on query costs")
    print(f"grid {args.rows}x{args.rows}, H={args.H}, L={args.L}, {args.queries} queries per phase")
    print(f"{'phase':<12}{fast['backend']:>12}{slow['backend']:>12}{'speedup':>10}")
    for phase in fast["times"]:
        a, b = fast["times"][phase], slow["times"][phase]
        print(f"{phase:<12}{a:>11.3f}s{b:>11.3f}s{b / a if a > 0 else float('inf'):>9.1f}x")
    print(f"costs identical across backends ({len(fast['costs'])} answers); "
          f"total {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
