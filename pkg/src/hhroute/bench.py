"""Benchmark harness: exact oracle vs. heuristic and naive hierarchy queries.

Each query gets its own random weight scenario (every arc redrawn from
[min_factor*w, max_factor*w]). Errors are relative to the oracle's dynamic optimum,
in percent. The machine-readable report leaves out wall-clock times so that a
fixed seed gives byte-identical output; the human table shows them.
"""
from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .hierarchy import HighwayHierarchy
from .oracle import dijkstra_p2p, dijkstra_sssp
from .overlay import WeightOverlay, random_overlay
from .query import query, query_naive

ALGORITHMS = ("oracle", "hh-heuristic", "hh-naive")


@dataclass
class AlgoSummary:
    name: str
    settled_mean: float = 0.0
    explored_mean: float = 0.0
    seconds_mean: float = 0.0
    error_mean: float = 0.0  # percent
    error_var: float = 0.0
    error_max: float = 0.0


@dataclass
class QueryRecord:
    source: int
    target: int
    costs: dict
    settled: dict
    explored: dict
    seconds: dict
    errors: dict


@dataclass
class BenchReport:
    queries: int
    seed: int
    params: dict
    summaries: list[AlgoSummary]
    records: list[QueryRecord] = field(default_factory=list, repr=False)
    unreachable: int = 0

    def summary(self, name: str) -> AlgoSummary:
        for s in self.summaries:
            if s.name == name:
                return s
        raise KeyError(name)

    def machine_lines(self) -> list[str]:
        lines = [f"bench.queries={self.queries}", f"bench.seed={self.seed}",
                 f"bench.unreachable={self.unreachable}"]
        lines += [f"param.{k}={v}" for k, v in self.params.items()]
        for s in self.summaries:
            lines.append(
                f"algo={s.name} settled_mean={s.settled_mean:.3f} explored_mean={s.explored_mean:.3f} "
                f"error_mean_pct={s.error_mean:.6f} error_var={s.error_var:.6f} error_max_pct={s.error_max:.6f}")
        return lines

    def table(self) -> str:
        heads = ["", *(s.name for s in self.summaries)]
        rows = [
            ["settled nodes", *(f"{s.settled_mean:.1f}" for s in self.summaries)],
            ["explored nodes", *(f"{s.explored_mean:.1f}" for s in self.summaries)],
            ["query time [ms]", *(f"{1000 * s.seconds_mean:.3f}" for s in self.summaries)],
            ["error % (variance)", *(f"{s.error_mean:.2f} ({s.error_var:.2f})" for s in self.summaries)],
            ["max error %", *(f"{s.error_max:.2f}" for s in self.summaries)],
        ]
        return format_table(heads, rows)


def format_table(heads: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(str(r[i])) for r in [heads, *rows]) for i in range(len(heads))]
    out = []
    for r in [heads, *rows]:
        out.append("  ".join(str(c).ljust(w) if i == 0 else str(c).rjust(w)
                             for i, (c, w) in enumerate(zip(r, widths))).rstrip())
    return "\n".join(out)


def sample_pairs(h: HighwayHierarchy, count: int, rng: np.random.Generator, min_rank: int = 0):
    """Uniform (s, t) pairs; with ``min_rank`` > 0, t is uniform among the nodes that a
    static Dijkstra from s settles at position >= min_rank."""
    n = h.node_count
    pairs = []
    if n == 0:
        return pairs
    attempts = 0
    while len(pairs) < count:
        attempts += 1
        if attempts > 100 * count + 1000:
            raise ValueError(f"could not find {count} pairs with Dijkstra rank >= {min_rank}")
        s = int(rng.integers(n))
        if min_rank <= 0:
            pairs.append((s, int(rng.integers(n))))
            continue
        order = dijkstra_sssp(h.graph, None, s).order
        if order.size <= min_rank:
            continue
        pairs.append((s, int(order[rng.integers(min_rank, order.size)])))
    return pairs


def _timed(fn, repeats):
    res = fn()
    if repeats <= 1:
        return res, res.stats.seconds
    times = [res.stats.seconds]
    for _ in range(repeats - 1):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return res, statistics.median(times)


def run_bench(h: HighwayHierarchy, queries: int, seed: int, min_factor: int = 1, max_factor: int = 15,
              min_rank: int = 0, exclude=None, repeats: int = 1) -> BenchReport:
    if queries < 1:
        raise ValueError("queries must be >= 1")
    g = h.graph
    rng = np.random.default_rng(seed)
    pairs = sample_pairs(h, queries, rng, min_rank)
    scenario_seeds = np.random.SeedSequence(seed).generate_state(queries, dtype=np.uint64)
    static = min_factor == 1 and max_factor == 1 and not exclude
    records = []
    unreachable = 0
    for i, (s, t) in enumerate(pairs):
        if static:
            ov = WeightOverlay.static(g)
        else:
            ov = random_overlay(g, int(scenario_seeds[i]), min_factor, max_factor, exclude)
        runs = {
            "oracle": _timed(lambda: dijkstra_p2p(g, ov, s, t), repeats),
            "hh-heuristic": _timed(lambda: query(h, ov, s, t), repeats),
            "hh-naive": _timed(lambda: query_naive(h, ov, s, t), repeats),
        }
        opt = runs["oracle"][0]
        if not opt.reachable:
            unreachable += 1
            continue
        costs, settled, explored, secs, errors = {}, {}, {}, {}, {}
        for name, (res, sec) in runs.items():
            if not res.reachable:
                raise RuntimeError(f"{name} found no path for reachable pair ({s}, {t})")
            costs[name] = res.cost
            settled[name] = res.stats.settled
            explored[name] = res.stats.explored
            secs[name] = sec
            errors[name] = 0.0 if opt.cost == 0 else 100.0 * (res.cost - opt.cost) / opt.cost
        records.append(QueryRecord(s, t, costs, settled, explored, secs, errors))

    summaries = []
    for name in ALGORITHMS:
        if records:
            errs = np.asarray([r.errors[name] for r in records])
            summaries.append(AlgoSummary(
                name,
                float(np.mean([r.settled[name] for r in records])),
                float(np.mean([r.explored[name] for r in records])),
                float(np.mean([r.seconds[name] for r in records])),
                float(errs.mean()), float(errs.var()), float(errs.max()),
            ))
        else:
            summaries.append(AlgoSummary(name))
    params = {"H": h.H, "L": h.L, "nodes": h.node_count, "arcs": h.original_arc_count,
              "min_factor": min_factor, "max_factor": max_factor, "min_rank": min_rank,
              "excluded": 0 if exclude is None else len(list(exclude))}
    return BenchReport(queries, seed, params, summaries, records, unreachable)
