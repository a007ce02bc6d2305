"""Immutable directed multigraph in compressed adjacency form.

Arcs keep the order they were given in (``ArcId`` == input order). Weights are
non-negative integer milliseconds.

Searches never compare raw weights. They compare *packed* weights
``(w << shift) + perturbation(arc)`` where the perturbation is a small
deterministic per-arc hash. Path sums stay exact (``packed >> shift`` gives the
real cost back) and equal-cost paths get a fixed, subpath-consistent order, so
every Dijkstra in the package agrees on one canonical shortest path per pair.
"""
from __future__ import annotations

import io
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

INF = 1 << 62
PERTURB_MAX = 255


class GraphError(ValueError):
    pass


class GraphFormatError(GraphError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)


def packing_shift(node_count: int) -> int:
    """Bits reserved below the real weight; any simple path's perturbation fits."""
    return max(8, (PERTURB_MAX * max(node_count, 1)).bit_length())


def arc_perturbation(arc_count: int, offset: int = 0) -> np.ndarray:
    # splitmix64 finalizer on the arc index
    with np.errstate(over="ignore"):
        z = np.arange(offset, offset + arc_count, dtype=np.uint64) + np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return (z % np.uint64(PERTURB_MAX)).astype(np.int64) + 1


def max_weight_total(node_count: int) -> int:
    """Largest total arc weight for which packed path sums cannot reach INF."""
    return (1 << (62 - packing_shift(node_count))) - 1


def _exact_sum(values: np.ndarray) -> int:
    if values.size == 0:
        return 0
    if int(values.max()) < (1 << 31) and values.size < (1 << 31):
        return int(values.sum())
    return int(np.sum(values.astype(object)))


def check_weight_total(node_count: int, weights: np.ndarray) -> None:
    total = _exact_sum(weights)
    if total > max_weight_total(node_count):
        raise GraphError(
            f"total arc weight {total} exceeds {max_weight_total(node_count)}; "
            "path costs could overflow"
        )


def _csr(keys: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(keys, kind="stable").astype(np.int64)
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(keys, minlength=n), out=ptr[1:])
    return ptr, order


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class Graph:
    """Directed graph with forward and backward adjacency over the same arc ids."""

    def __init__(self, node_count: int, tails, heads, weights):
        n = int(node_count)
        if n < 0:
            raise GraphError("node_count must be non-negative")
        tails = np.asarray(tails, dtype=np.int64).reshape(-1)
        heads = np.asarray(heads, dtype=np.int64).reshape(-1)
        weights = np.asarray(weights, dtype=np.int64).reshape(-1)
        if not (tails.size == heads.size == weights.size):
            raise GraphError("tails, heads and weights must have equal length")
        if tails.size:
            if tails.min() < 0 or heads.min() < 0 or tails.max() >= n or heads.max() >= n:
                raise GraphError("node index out of range")
            if weights.min() < 0:
                raise GraphError("negative arc weight")
            loops = np.flatnonzero(tails == heads)
            if loops.size:
                raise GraphError(f"self-loop at arc {int(loops[0])}")
        check_weight_total(n, weights)

        self.node_count = n
        self.tails = _frozen(tails.copy())
        self.heads = _frozen(heads.copy())
        self.weights = _frozen(weights.copy())
        out_ptr, out_arc = _csr(self.tails, n)
        in_ptr, in_arc = _csr(self.heads, n)
        self.out_ptr = _frozen(out_ptr)
        self.out_arc = _frozen(out_arc)
        self.in_ptr = _frozen(in_ptr)
        self.in_arc = _frozen(in_arc)
        self.is_reverse = False
        self._packed = None

    @property
    def arc_count(self) -> int:
        return int(self.tails.size)

    @property
    def shift(self) -> int:
        return packing_shift(self.node_count)

    @property
    def perturbation(self) -> np.ndarray:
        return arc_perturbation(self.arc_count)

    @property
    def packed_weights(self) -> np.ndarray:
        if self._packed is None:
            self._packed = _frozen((self.weights << self.shift) + self.perturbation)
        return self._packed

    def pack(self, weights) -> np.ndarray:
        """Pack an alternative per-arc weight vector (e.g. a dynamic snapshot)."""
        weights = np.asarray(weights, dtype=np.int64)
        if weights.shape != (self.arc_count,):
            raise GraphError("weight vector length does not match arc count")
        if weights.size and weights.min() < 0:
            raise GraphError("negative arc weight")
        check_weight_total(self.node_count, weights)
        return (weights << self.shift) + self.perturbation

    def out_arcs(self, v: int) -> list[tuple[int, int, int]]:
        arcs = self.out_arc[self.out_ptr[v]:self.out_ptr[v + 1]]
        return [(int(a), int(self.heads[a]), int(self.weights[a])) for a in arcs]

    def in_arcs(self, v: int) -> list[tuple[int, int, int]]:
        """Arcs entering ``v`` as (ArcId, tail, weight)."""
        arcs = self.in_arc[self.in_ptr[v]:self.in_ptr[v + 1]]
        return [(int(a), int(self.tails[a]), int(self.weights[a])) for a in arcs]

    def out_degree(self) -> np.ndarray:
        return np.diff(self.out_ptr)

    def in_degree(self) -> np.ndarray:
        return np.diff(self.in_ptr)

    def arc_list(self) -> list[tuple[int, int, int]]:
        return list(zip(self.tails.tolist(), self.heads.tolist(), self.weights.tolist()))

    def reverse_view(self) -> "Graph":
        """Same arcs with tail and head exchanged; shares all storage."""
        rev = Graph.__new__(Graph)
        rev.node_count = self.node_count
        rev.tails, rev.heads = self.heads, self.tails
        rev.weights = self.weights
        rev.out_ptr, rev.out_arc = self.in_ptr, self.in_arc
        rev.in_ptr, rev.in_arc = self.out_ptr, self.out_arc
        rev.is_reverse = not self.is_reverse
        rev._packed = self._packed
        return rev

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and np.array_equal(self.tails, other.tails)
            and np.array_equal(self.heads, other.heads)
            and np.array_equal(self.weights, other.weights)
        )

    def __repr__(self):
        return f"Graph(nodes={self.node_count}, arcs={self.arc_count})"


def _data_lines(stream: Iterable[str]):
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _ints(line: str, lineno: int, count: int, source) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise GraphFormatError(f"expected {count} integers, got {len(parts)}", lineno, source)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise GraphFormatError(f"not an integer in {line!r}", lineno, source) from None


def parse_graph(stream: TextIO | Iterable[str], source: str | None = None) -> Graph:
    """Read the edge-list format: ``<nodes> <arcs>`` then ``<tail> <head> <weight_ms>`` lines."""
    lines = _data_lines(stream)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise GraphFormatError("missing header line", None, source) from None
    n, m = _ints(header, lineno, 2, source)
    if n < 0 or m < 0:
        raise GraphFormatError("negative node or arc count", lineno, source)
    tails = np.empty(m, dtype=np.int64)
    heads = np.empty(m, dtype=np.int64)
    weights = np.empty(m, dtype=np.int64)
    i = 0
    for lineno, line in lines:
        if i >= m:
            raise GraphFormatError(f"more than {m} arc lines", lineno, source)
        u, v, w = _ints(line, lineno, 3, source)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"node index out of range 0..{n - 1}", lineno, source)
        if w < 0:
            raise GraphFormatError("negative weight", lineno, source)
        if u == v:
            raise GraphFormatError(f"self-loop at node {u}", lineno, source)
        tails[i], heads[i], weights[i] = u, v, w
        i += 1
    if i != m:
        raise GraphFormatError(f"expected {m} arc lines, found {i}", None, source)
    try:
        return Graph(n, tails, heads, weights)
    except GraphFormatError:
        raise
    except GraphError as exc:
        raise GraphFormatError(str(exc), None, source) from None


def parse_graph_text(text: str) -> Graph:
    return parse_graph(io.StringIO(text))


def serialize_graph(g: Graph) -> str:
    out = [f"{g.node_count} {g.arc_count}"]
    out.extend(f"{u} {v} {w}" for u, v, w in g.arc_list())
    return "\n".join(out) + "\n"


def read_graph(path) -> Graph:
    path = Path(path)
    with open(path, encoding="utf-8", newline=None) as fh:
        return parse_graph(fh, source=str(path))


def write_graph(g: Graph, path) -> None:
    Path(path).write_text(serialize_graph(g), encoding="utf-8")
