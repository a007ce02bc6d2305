"""``hhroute`` command line.

Exit codes: 0 ok, 1 usage, 2 I/O or file format, 3 no path.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .bench import format_table, run_bench
from .graph import GraphError, read_graph
from .hierarchy import ContractionPolicy, build_hierarchy
from .oracle import dijkstra_p2p, dijkstra_sssp
from .overlay import (
    OverlayError,
    WeightOverlay,
    apply_batch,
    read_weights,
    sample_random_weights,
    write_weights,
)
from .query import query, query_naive
from .serialize import HierarchyFormatError, read_hierarchy, write_hierarchy

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NO_PATH = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _level_rows(h):
    return [[str(r.level), str(r.highway_nodes), str(r.highway_arcs), str(r.highway_shortcuts),
             str(r.core_nodes), str(r.core_arcs)] for r in h.level_table()]


def cmd_preprocess(args, out) -> int:
    g = read_graph(args.graph)
    policy = ContractionPolicy(args.max_in, args.max_out, args.extra, args.withdraw_cycles)
    h = build_hierarchy(g, args.hh_H, args.levels, policy)
    write_hierarchy(h, args.out)
    heads = ["level", "nodes", "arcs", "shortcuts", "core nodes", "core arcs"]
    print(format_table(heads, _level_rows(h)), file=out)
    for r in h.level_table():
        print(f"level={r.level} nodes={r.highway_nodes} arcs={r.highway_arcs} "
              f"shortcuts={r.highway_shortcuts} core_nodes={r.core_nodes} core_arcs={r.core_arcs}", file=out)
    return EXIT_OK


def _overlay(g, weights_path):
    ov = WeightOverlay.static(g)
    if weights_path:
        ov = apply_batch(ov, read_weights(weights_path, g.arc_count))
    return ov


def _check_node(n, v, name):
    if not 0 <= v < n:
        raise UsageError(f"{name} {v} out of range (graph has {n} nodes)")


def _run_query(h, ov, s, t, mode):
    if mode == "oracle":
        return dijkstra_p2p(h.graph, ov, s, t)
    if mode == "naive":
        return query_naive(h, ov, s, t)
    return query(h, ov, s, t)


def _print_result(res, ov, mode, out):
    if not res.reachable:
        print(f"no path from {res.source} to {res.target}", file=out)
        print(f"mode={mode} source={res.source} target={res.target} reachable=0 "
              f"settled={res.stats.settled} explored={res.stats.explored}", file=out)
        return EXIT_NO_PATH
    g = ov.graph
    print("path: " + " ".join(str(v) for v in res.nodes), file=out)
    rows = [[str(int(a)), str(int(g.tails[a])), str(int(g.heads[a])), str(int(ov.values[a]))] for a in res.arcs]
    if rows:
        print(format_table(["arc", "tail", "head", "cost"], rows), file=out)
    print(f"total cost: {res.cost}", file=out)
    print(f"settled: {res.stats.settled}  explored: {res.stats.explored}  "
          f"time: {1000 * res.stats.seconds:.3f} ms", file=out)
    print(f"mode={mode} source={res.source} target={res.target} reachable=1 cost={res.cost} "
          f"arcs={len(res.arcs)} settled={res.stats.settled} explored={res.stats.explored}", file=out)
    return EXIT_OK


def cmd_query(args, out) -> int:
    h = read_hierarchy(args.hh)
    _check_node(h.node_count, args.source, "source")
    _check_node(h.node_count, args.target, "target")
    ov = _overlay(h.graph, args.weights)
    res = _run_query(h, ov, args.source, args.target, args.mode)
    return _print_result(res, ov, args.mode, out)


def cmd_oracle(args, out) -> int:
    g = read_graph(args.graph)
    _check_node(g.node_count, args.source, "source")
    ov = _overlay(g, args.weights)
    if args.target is not None:
        _check_node(g.node_count, args.target, "target")
        return _print_result(dijkstra_p2p(g, ov, args.source, args.target), ov, "oracle", out)
    tree = dijkstra_sssp(g, ov, args.source)
    for v in range(g.node_count):
        d = int(tree.dist[v])
        print(f"node={v} dist={'inf' if d < 0 else d}", file=out)
    return EXIT_OK


def cmd_bench(args, out) -> int:
    h = read_hierarchy(args.hh)
    exclude = None
    if args.exclude:
        exclude = read_arc_list(args.exclude, h.original_arc_count)
    report = run_bench(h, args.queries, args.seed, args.min_factor, args.max_factor,
                       args.min_rank, exclude, args.repeats)
    print(report.table(), file=out)
    lines = report.machine_lines()
    for line in lines:
        print(line, file=out)
    if args.report:
        Path(args.report).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return EXIT_OK


def read_arc_list(path, arc_count: int) -> list[int]:
    """One arc id per line (first column); ``#`` comments skipped."""
    arcs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                a = int(line.split()[0])
            except ValueError:
                raise GraphError(f"{path}:{lineno}: not an arc id: {line!r}") from None
            if not 0 <= a < arc_count:
                raise GraphError(f"{path}:{lineno}: arc id {a} out of range")
            arcs.append(a)
    return arcs


def cmd_gen_weights(args, out) -> int:
    g = read_graph(args.graph)
    exclude = read_arc_list(args.exclude, g.arc_count) if args.exclude else None
    if not 1 <= args.min_factor <= args.max_factor:
        raise UsageError("need 1 <= --min-factor <= --max-factor")
    batch = sample_random_weights(g, args.seed, args.min_factor, args.max_factor, exclude)
    write_weights(batch, args.out, header=batch.label)
    print(f"weights={len(batch)} out={args.out}", file=out)
    return EXIT_OK


def format_path_file(nodes, fmt: str = "nodes") -> str:
    if fmt == "csv":
        return "index,node\n" + "".join(f"{i},{v}\n" for i, v in enumerate(nodes))
    return "".join(f"{v}\n" for v in nodes)


def parse_path_file(text: str) -> list[int]:
    """Inverse of :func:`format_path_file` for either format."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if lines and lines[0] == "index,node":
        return [int(ln.split(",")[1]) for ln in lines[1:]]
    return [int(ln) for ln in lines]


def cmd_export_path(args, out) -> int:
    h = read_hierarchy(args.hh)
    _check_node(h.node_count, args.source, "source")
    _check_node(h.node_count, args.target, "target")
    ov = _overlay(h.graph, args.weights)
    res = _run_query(h, ov, args.source, args.target, args.mode)
    if not res.reachable:
        print(f"no path from {args.source} to {args.target}", file=out)
        return EXIT_NO_PATH
    Path(args.out).write_text(format_path_file(res.nodes, args.format), encoding="utf-8")
    print(f"nodes={len(res.nodes)} cost={res.cost} out={args.out}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hhroute", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log construction progress")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("preprocess", help="build a hierarchy file from an edge list")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--hh-H", dest="hh_H", type=int, required=True, help="neighbourhood size H")
    sp.add_argument("--levels", type=int, required=True, help="number of levels L above the base")
    sp.add_argument("--out", required=True)
    sp.add_argument("--max-in", type=int, default=4)
    sp.add_argument("--max-out", type=int, default=4)
    sp.add_argument("--extra", type=int, default=2, help="allowed shortcuts beyond in+out")
    sp.add_argument("--withdraw-cycles", action="store_true",
                    help="keep bypass sets free of cycles among bypassed nodes")
    sp.set_defaults(func=cmd_preprocess)

    def query_args(sp):
        sp.add_argument("--hh", required=True)
        sp.add_argument("--source", type=int, required=True)
        sp.add_argument("--target", type=int, required=True)
        sp.add_argument("--weights", help="dynamic weight file (<arc_id> <weight_ms> lines)")
        sp.add_argument("--mode", choices=["heuristic", "naive", "oracle"], default="heuristic")

    sp = sub.add_parser("query", help="one source-target query")
    query_args(sp)
    sp.set_defaults(func=cmd_query)

    sp = sub.add_parser("export-path", help="write a query's node sequence to a file")
    query_args(sp)
    sp.add_argument("--out", required=True)
    sp.add_argument("--format", choices=["nodes", "csv"], default="nodes")
    sp.set_defaults(func=cmd_export_path)

    sp = sub.add_parser("oracle", help="exact Dijkstra on the edge list")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--source", type=int, required=True)
    sp.add_argument("--target", type=int)
    sp.add_argument("--weights")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("bench", help="oracle vs heuristic vs naive under random scenarios")
    sp.add_argument("--hh", required=True)
    sp.add_argument("--queries", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--min-factor", type=int, default=1)
    sp.add_argument("--max-factor", type=int, default=15)
    sp.add_argument("--min-rank", type=int, default=0, help="only targets of at least this Dijkstra rank")
    sp.add_argument("--exclude", help="arc ids kept at their static weight")
    sp.add_argument("--repeats", type=int, default=1, help="median of this many timings per query")
    sp.add_argument("--report", help="also write the key=value lines here")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("gen-weights", help="write one random weight scenario")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--min-factor", type=int, required=True)
    sp.add_argument("--max-factor", type=int, required=True)
    sp.add_argument("--exclude")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_gen_weights)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"hhroute: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, GraphError, HierarchyFormatError, OverlayError) as exc:
        print(f"hhroute: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"hhroute: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
