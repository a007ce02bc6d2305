from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class SearchStats:
    settled: int = 0
    explored: int = 0
    seconds: float = 0.0


@dataclass
class QueryResult:
    """A source-target answer with the path expanded to original arcs."""

    source: int
    target: int
    arcs: np.ndarray
    cost: int
    stats: SearchStats = field(default_factory=SearchStats)
    nodes: list[int] = field(default_factory=list)
    # packed-level arc sequence before shortcut expansion (hierarchy queries only)
    packed_arcs: np.ndarray | None = None

    reachable = True

    def __len__(self):
        return int(len(self.arcs))


@dataclass
class NoPath:
    source: int
    target: int
    stats: SearchStats = field(default_factory=SearchStats)

    reachable = False
    cost = None


def path_nodes(tails, heads, source: int, arcs) -> list[int]:
    nodes = [int(source)]
    for a in arcs:
        if int(tails[a]) != nodes[-1]:
            raise ValueError(f"arc {int(a)} does not continue the path at node {nodes[-1]}")
        nodes.append(int(heads[a]))
    return nodes
