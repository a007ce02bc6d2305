"""Dynamic weight snapshots layered over a graph's static weights.

A :class:`WeightOverlay` is immutable; :func:`apply_batch` returns a new snapshot
with a bumped version and leaves its predecessor untouched, so a query can keep
using the snapshot it started with while updates arrive.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .graph import Graph, GraphError, GraphFormatError, check_weight_total


class OverlayError(ValueError):
    pass


@dataclass(frozen=True)
class WeightUpdateBatch:
    arcs: np.ndarray
    weights: np.ndarray
    label: str = ""

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], label: str = "") -> "WeightUpdateBatch":
        pairs = list(pairs)
        arcs = np.asarray([a for a, _ in pairs], dtype=np.int64)
        weights = np.asarray([w for _, w in pairs], dtype=np.int64)
        return cls(arcs, weights, label)

    def __len__(self):
        return int(self.arcs.size)


@dataclass(frozen=True)
class WeightOverlay:
    """Per-arc dynamic weights for the original arcs of ``graph``.

    ``values`` is a dense read-only copy; entries never set equal the static weight.
    """

    graph: Graph
    values: np.ndarray = field(repr=False)
    version: int = 0
    label: str = ""

    @classmethod
    def static(cls, graph: Graph) -> "WeightOverlay":
        return cls(graph, graph.weights, 0, "static")

    @property
    def is_static(self) -> bool:
        return self.values is self.graph.weights or np.array_equal(self.values, self.graph.weights)

    def changed_arcs(self) -> np.ndarray:
        return np.flatnonzero(self.values != self.graph.weights)

    def __getitem__(self, arc: int) -> int:
        return int(self.values[arc])


def apply_batch(overlay: WeightOverlay, batch: WeightUpdateBatch) -> WeightOverlay:
    m = overlay.graph.arc_count
    arcs = np.asarray(batch.arcs, dtype=np.int64)
    weights = np.asarray(batch.weights, dtype=np.int64)
    if arcs.shape != weights.shape:
        raise OverlayError("batch arcs and weights differ in length")
    if arcs.size:
        if arcs.min() < 0:
            raise OverlayError("negative arc id in batch")
        if arcs.max() >= m:
            bad = int(arcs[arcs >= m][0])
            raise OverlayError(f"arc id {bad} is not an original arc (arc count {m}); "
                               "shortcut arcs cannot be weighted directly")
        if weights.min() < 0:
            raise OverlayError("negative dynamic weight")
    values = overlay.values.copy()
    values[arcs] = weights
    try:
        check_weight_total(overlay.graph.node_count, values)
    except GraphError as exc:
        raise OverlayError(str(exc)) from None
    values.setflags(write=False)
    return WeightOverlay(overlay.graph, values, overlay.version + 1, batch.label)


def dynamic_weight(overlay: WeightOverlay, arc: int, hierarchy=None) -> int:
    """Dynamic weight of an original arc, or of a shortcut as the sum over its expansion."""
    m = overlay.graph.arc_count
    if arc < m:
        return int(overlay.values[arc])
    if hierarchy is None:
        raise OverlayError(f"arc {arc} is a shortcut; pass the hierarchy that owns it")
    return int(overlay.values[hierarchy.expansion(arc)].sum())


def sample_random_weights(g: Graph, seed: int, min_factor: int = 1, max_factor: int = 15,
                          exclude: Iterable[int] | None = None, label: str = "") -> WeightUpdateBatch:
    """Each arc independently uniform over the integers in [min_factor*w, max_factor*w]."""
    if not 1 <= min_factor <= max_factor:
        raise OverlayError("need 1 <= min_factor <= max_factor")
    rng = np.random.default_rng(seed)
    lo = g.weights * min_factor
    hi = g.weights * max_factor
    values = rng.integers(lo, hi, endpoint=True, dtype=np.int64) if g.arc_count else lo.copy()
    arcs = np.arange(g.arc_count, dtype=np.int64)
    if exclude is not None:
        keep = np.ones(g.arc_count, dtype=bool)
        keep[np.asarray(list(exclude), dtype=np.int64)] = False
        arcs, values = arcs[keep], values[keep]
    return WeightUpdateBatch(arcs, values, label or f"random seed={seed} [{min_factor},{max_factor}]")


def random_overlay(g: Graph, seed: int, min_factor: int = 1, max_factor: int = 15,
                   exclude=None) -> WeightOverlay:
    return apply_batch(WeightOverlay.static(g), sample_random_weights(g, seed, min_factor, max_factor, exclude))


def parse_weights(stream, arc_count: int | None = None, source: str | None = None) -> WeightUpdateBatch:
    """``<arc_id> <weight_ms>`` lines; ``#`` comments and blank lines skipped."""
    arcs, weights = [], []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError("expected '<arc_id> <weight_ms>'", lineno, source)
        try:
            a, w = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"not an integer in {line!r}", lineno, source) from None
        if a < 0 or (arc_count is not None and a >= arc_count):
            raise GraphFormatError(f"arc id {a} out of range", lineno, source)
        if w < 0:
            raise GraphFormatError("negative weight", lineno, source)
        arcs.append(a)
        weights.append(w)
    return WeightUpdateBatch(np.asarray(arcs, np.int64), np.asarray(weights, np.int64),
                             source or "")


def read_weights(path, arc_count: int | None = None) -> WeightUpdateBatch:
    with open(path, encoding="utf-8") as fh:
        return parse_weights(fh, arc_count, str(path))


def format_weights(batch: WeightUpdateBatch, header: str | None = None) -> str:
    lines = [f"# {header}"] if header else []
    lines.extend(f"{int(a)} {int(w)}" for a, w in zip(batch.arcs, batch.weights))
    return "\n".join(lines) + "\n"


def write_weights(batch: WeightUpdateBatch, path, header: str | None = None) -> None:
    Path(path).write_text(format_weights(batch, header), encoding="utf-8")
