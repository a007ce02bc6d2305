"""Binary hierarchy files.

Layout (all integers little-endian)::

    magic        4 bytes  b"HHDG"
    version      u16      FORMAT_VERSION
    reserved     u16      0
    H, L         u32, u32
    policy       i32 max_in, i32 max_out, i32 extra, i32 withdraw_cycles
    n, m, M      u64 x 3  nodes, original arcs, all arcs (M - m shortcuts)
    graph        i64[m] tails, i64[m] heads, i64[m] weights
    shortcuts    i64[M-m] tails, heads, weights, packed weights
    arc_level    i64[M]
    arc_birth    i64[M]
    exp_ptr      i64[M-m+1]
    exp_arcs     i64[exp_ptr[-1]]
    node_level   i64[n]
    core_level   i64[n]
    radius_fwd   i64[(L+1) * n]  row-major by level
    radius_rev   i64[(L+1) * n]
    level count  u32
    per level    i64 x 8  level, highway_nodes, highway_arcs, highway_shortcuts,
                          core_nodes, core_arcs, shortcuts_added, tree_work

Build timings are not stored, so two builds of the same input give identical bytes.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .graph import Graph
from .hierarchy import ContractionPolicy, HighwayHierarchy, LevelInfo

MAGIC = b"HHDG"
FORMAT_VERSION = 1

_HEAD = struct.Struct("<4sHHII iiii QQQ")
_I64 = np.dtype("<i8")


class HierarchyFormatError(ValueError):
    pass


class BadMagicError(HierarchyFormatError):
    pass


class VersionMismatchError(HierarchyFormatError):
    def __init__(self, found: int):
        self.found = found
        super().__init__(f"hierarchy format version {found}, this build reads version {FORMAT_VERSION}")


class TruncatedFileError(HierarchyFormatError):
    pass


def serialize_hierarchy(h: HighwayHierarchy) -> bytes:
    n = h.node_count
    m = h.original_arc_count
    M = h.arc_count
    pol = h.policy
    parts = [_HEAD.pack(MAGIC, FORMAT_VERSION, 0, h.H, h.L, pol.max_in, pol.max_out, pol.extra,
                        int(pol.withdraw_cycles), n, m, M)]

    def arr(a):
        parts.append(np.ascontiguousarray(a, dtype=_I64).tobytes())

    g = h.graph
    arr(g.tails)
    arr(g.heads)
    arr(g.weights)
    arr(h.tails[m:])
    arr(h.heads[m:])
    arr(h.weights[m:])
    arr(h.packed[m:])
    arr(h.arc_level)
    arr(h.arc_birth)
    arr(h.exp_ptr)
    arr(h.exp_arcs)
    arr(h.node_level)
    arr(h.core_level)
    arr(h.radius_fwd.reshape(-1))
    arr(h.radius_rev.reshape(-1))
    parts.append(struct.pack("<I", len(h.levels)))
    for info in h.levels:
        arr([info.level, info.highway_nodes, info.highway_arcs, info.highway_shortcuts,
             info.core_nodes, info.core_arcs, info.shortcuts_added, info.tree_work])
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = memoryview(data)
        self.off = 0

    def take(self, size: int, what: str) -> memoryview:
        end = self.off + size
        if size < 0 or end > len(self.data):
            raise TruncatedFileError(f"file ends inside {what} (need {size} bytes at offset {self.off})")
        chunk = self.data[self.off:end]
        self.off = end
        return chunk

    def ints(self, count: int, what: str) -> np.ndarray:
        raw = self.take(count * 8, what)
        return np.frombuffer(raw, dtype=_I64).astype(np.int64)


def deserialize_hierarchy(data: bytes) -> HighwayHierarchy:
    if len(data) < 4:
        raise TruncatedFileError("file shorter than the magic number")
    if bytes(data[:4]) != MAGIC:
        raise BadMagicError(f"not a hierarchy file (magic {bytes(data[:4])!r})")
    if len(data) >= 6:
        (version,) = struct.unpack_from("<H", data, 4)
        if version != FORMAT_VERSION:
            raise VersionMismatchError(version)
    r = _Reader(data)
    head = r.take(_HEAD.size, "header")
    (_, _, _, H, L, max_in, max_out, extra, withdraw, n, m, M) = _HEAD.unpack(head)
    if M < m:
        raise HierarchyFormatError("arc count smaller than original arc count")
    k = M - m
    tails = r.ints(m, "graph tails")
    heads = r.ints(m, "graph heads")
    weights = r.ints(m, "graph weights")
    s_tails = r.ints(k, "shortcut tails")
    s_heads = r.ints(k, "shortcut heads")
    s_weights = r.ints(k, "shortcut weights")
    s_packed = r.ints(k, "shortcut packed weights")
    arc_level = r.ints(M, "arc levels")
    arc_birth = r.ints(M, "arc birth levels")
    exp_ptr = r.ints(k + 1, "expansion offsets")
    if exp_ptr[-1] < 0:
        raise HierarchyFormatError("negative expansion length")
    exp_arcs = r.ints(int(exp_ptr[-1]), "expansion arcs")
    node_level = r.ints(n, "node levels")
    core_level = r.ints(n, "core levels")
    rad_f = r.ints((L + 1) * n, "forward radii").reshape(L + 1, n)
    rad_b = r.ints((L + 1) * n, "reverse radii").reshape(L + 1, n)
    (count,) = struct.unpack("<I", r.take(4, "level count"))
    infos = []
    for _ in range(count):
        row = r.ints(8, "level table")
        infos.append(LevelInfo(*(int(x) for x in row)))
    if r.off != len(r.data):
        raise HierarchyFormatError(f"{len(r.data) - r.off} trailing bytes after hierarchy data")

    try:
        g = Graph(n, tails, heads, weights)
    except ValueError as exc:
        raise HierarchyFormatError(f"embedded graph is invalid: {exc}") from exc
    policy = ContractionPolicy(max_in, max_out, extra, bool(withdraw))
    return HighwayHierarchy(
        graph=g, H=H, L=L, policy=policy,
        tails=np.concatenate([g.tails, s_tails]),
        heads=np.concatenate([g.heads, s_heads]),
        weights=np.concatenate([g.weights, s_weights]),
        packed=np.concatenate([g.packed_weights, s_packed]),
        arc_level=arc_level, arc_birth=arc_birth, exp_ptr=exp_ptr, exp_arcs=exp_arcs,
        node_level=node_level, core_level=core_level, radius_fwd=rad_f, radius_rev=rad_b,
        levels=infos,
    )


def write_hierarchy(h: HighwayHierarchy, path) -> None:
    Path(path).write_bytes(serialize_hierarchy(h))


def read_hierarchy(path) -> HighwayHierarchy:
    return deserialize_hierarchy(Path(path).read_bytes())
