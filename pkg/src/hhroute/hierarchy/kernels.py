"""Construction kernels: neighbourhoods, partial shortest-path trees, arc lifting.

All kernels work on a level core given as CSR over global node ids (nodes outside
the core simply have empty adjacency) and packed weights. Per-root workspaces are
reset through a ``touched`` list so a whole level costs O(sum of tree sizes).
"""
import numpy as np

from .._accel import kernel
from ..graph import INF
from ..heap import heap_pop, heap_push

LIFT_SLACK = 0
LIFT_DIRECT = 1
LIFT_SLACK_FORWARD = 2  # undirected-style slack init; wrong on directed graphs


@kernel
def neighbourhoods_kernel(roots, ptr, adj_arc, adj_other, w, H, radius):
    """Radius and member set of every root's H-neighbourhood.

    ``radius[root]`` becomes the packed distance of the H-th settled node, or INF
    when fewer than H nodes are reachable. Members are all nodes within the radius
    (ties at the radius included), returned as CSR sorted by node id.
    """
    n = radius.shape[0]
    dist = np.full(n, INF, np.int64)
    state = np.zeros(n, np.int8)
    heap = np.empty(n, np.int64)
    pos = np.full(n, -1, np.int64)
    touched = np.empty(n, np.int64)
    mem_ptr = np.zeros(roots.shape[0] + 1, np.int64)
    cap = max(16, roots.shape[0] * (H + 1))
    mem = np.empty(cap, np.int64)
    mem_d = np.empty(cap, np.int64)
    used = 0
    for ri in range(roots.shape[0]):
        root = roots[ri]
        nt = 0
        dist[root] = 0
        state[root] = 1
        touched[nt] = root
        nt += 1
        size = heap_push(heap, pos, dist, 0, root)
        settled = 0
        rad = INF
        start = used
        while size > 0:
            if settled >= H and dist[heap[0]] > rad:
                break
            u, size = heap_pop(heap, pos, dist, size)
            state[u] = 2
            settled += 1
            if used >= cap:
                cap *= 2
                bigger = np.empty(cap, np.int64)
                bigger[:used] = mem[:used]
                mem = bigger
                bigger_d = np.empty(cap, np.int64)
                bigger_d[:used] = mem_d[:used]
                mem_d = bigger_d
            mem[used] = u
            mem_d[used] = dist[u]
            used += 1
            if settled == H:
                rad = dist[u]
            du = dist[u]
            for i in range(ptr[u], ptr[u + 1]):
                a = adj_arc[i]
                v = adj_other[a]
                if state[v] == 2:
                    continue
                nd = du + w[a]
                if state[v] == 0:
                    state[v] = 1
                    touched[nt] = v
                    nt += 1
                    dist[v] = nd
                    size = heap_push(heap, pos, dist, size, v)
                elif nd < dist[v]:
                    dist[v] = nd
                    size = heap_push(heap, pos, dist, size, v)
        radius[root] = rad
        order = np.argsort(mem[start:used])
        mem[start:used] = mem[start:used][order]
        mem_d[start:used] = mem_d[start:used][order]
        mem_ptr[ri + 1] = used
        for i in range(nt):
            v = touched[i]
            dist[v] = INF
            state[v] = 0
            pos[v] = -1
    return mem_ptr, mem[:used].copy(), mem_d[:used].copy()


@kernel
def small_intersection(a_ptr, a_mem, slot_a, b_ptr, b_mem, slot_b):
    """|A(a) ∩ B(b)| capped at 2 for two sorted CSR member sets (the test only asks <= 1)."""
    i = a_ptr[slot_a]
    ie = a_ptr[slot_a + 1]
    j = b_ptr[slot_b]
    je = b_ptr[slot_b + 1]
    count = 0
    while i < ie and j < je:
        x = a_mem[i]
        y = b_mem[j]
        if x == y:
            count += 1
            if count >= 2:
                return count
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return count


@kernel
def partial_spt_kernel(root, ptr, adj_arc, adj_other, w, slot, mem_ptr, mem,
                       rslot, rmem_ptr, rmem, guard_radius, dist, state, pnode, parc, active, first, heap, pos, touched, order):
    """Grow B(root) until no active node is reached but unsettled.

    A node x settled on <root, s1, ..., x> with x != s1 turns passive when x lies
    beyond ``guard_radius[s1]`` and the member sets ``mem`` of s1 and ``rmem`` of x
    share at most one node (see ``levels.passive_operands``); status is otherwise inherited from the parent.
    Returns (#settled, #touched); ``order`` holds the settle sequence.
    """
    nt = 0
    dist[root] = 0
    state[root] = 1
    pnode[root] = -1
    parc[root] = -1
    active[root] = 1
    first[root] = -1
    touched[nt] = root
    nt += 1
    size = heap_push(heap, pos, dist, 0, root)
    open_active = 1
    ns = 0
    while size > 0 and open_active > 0:
        u, size = heap_pop(heap, pos, dist, size)
        if active[u]:
            open_active -= 1
        if u != root:
            p = pnode[u]
            active[u] = active[p]
            if p == root:
                first[u] = u
            else:
                first[u] = first[p]
                s1 = first[u]
                if (active[u] and dist[u] - dist[s1] > guard_radius[s1]
                        and small_intersection(mem_ptr, mem, slot[s1], rmem_ptr, rmem, rslot[u]) <= 1):
                    active[u] = 0
        state[u] = 2
        order[ns] = u
        ns += 1
        du = dist[u]
        for i in range(ptr[u], ptr[u + 1]):
            a = adj_arc[i]
            v = adj_other[a]
            if state[v] == 2:
                continue
            nd = du + w[a]
            if state[v] == 0:
                state[v] = 1
                touched[nt] = v
                nt += 1
                dist[v] = nd
                pnode[v] = u
                parc[v] = a
                active[v] = active[u]
                if active[v]:
                    open_active += 1
                size = heap_push(heap, pos, dist, size, v)
            elif nd < dist[v] or (nd == dist[v] and (u < pnode[v] or (u == pnode[v] and a < parc[v]))):
                if active[v]:
                    open_active -= 1
                dist[v] = nd
                pnode[v] = u
                parc[v] = a
                active[v] = active[u]
                if active[v]:
                    open_active += 1
                size = heap_push(heap, pos, dist, size, v)
    return ns, nt


@kernel
def lift_kernel(root, ns, order, dist, pnode, parc, root_radius, leaf_radius,
                mode, haschild, delta, stamp, out):
    """Arcs of B(root) raised to the next level; returns how many were written to ``out``.

    ``leaf_radius`` is the reverse radius for the directed rules and the forward
    radius for ``LIFT_SLACK_FORWARD``. ``stamp`` (per arc) deduplicates within a root.
    """
    for i in range(1, ns):
        haschild[pnode[order[i]]] = 1
    count = 0
    if mode == LIFT_DIRECT:
        for i in range(ns):
            t = order[i]
            if t == root or haschild[t]:
                continue
            rt = leaf_radius[t]
            x = t
            while x != root:
                if dist[x] <= root_radius:
                    break
                p = pnode[x]
                if rt < INF and dist[t] - dist[p] > rt:
                    a = parc[x]
                    if stamp[a] != root:
                        stamp[a] = root
                        out[count] = a
                        count += 1
                x = p
    else:
        for i in range(ns):
            delta[order[i]] = INF
        for i in range(ns):
            t = order[i]
            if t != root and haschild[t] == 0:
                delta[t] = leaf_radius[t]
        for i in range(ns - 1, 0, -1):
            u = order[i]
            if dist[u] <= root_radius or delta[u] >= INF:
                continue
            p = pnode[u]
            cand = delta[u] - (dist[u] - dist[p])
            if cand < delta[p]:
                delta[p] = cand
            if cand < 0:
                a = parc[u]
                if stamp[a] != root:
                    stamp[a] = root
                    out[count] = a
                    count += 1
    for i in range(ns):
        haschild[order[i]] = 0
    return count


@kernel
def reset_workspace(nt, touched, dist, state, pos, active):
    for i in range(nt):
        v = touched[i]
        dist[v] = INF
        state[v] = 0
        pos[v] = -1
        active[v] = 0


@kernel
def lift_level_kernel(roots, ptr, adj_arc, adj_other, w, slot, mem_ptr, mem,
                      rslot, rmem_ptr, rmem, guard_radius, fwd_radius, leaf_radius, mode,
                      arc_total, lifted):
    """Run B(v) + lifting for every root; sets ``lifted[a] = 1``. Returns total tree size."""
    n = fwd_radius.shape[0]
    dist = np.full(n, INF, np.int64)
    state = np.zeros(n, np.int8)
    pnode = np.full(n, -1, np.int64)
    parc = np.full(n, -1, np.int64)
    active = np.zeros(n, np.int8)
    first = np.full(n, -1, np.int64)
    heap = np.empty(n, np.int64)
    pos = np.full(n, -1, np.int64)
    touched = np.empty(n, np.int64)
    order = np.empty(n, np.int64)
    haschild = np.zeros(n, np.int8)
    delta = np.full(n, INF, np.int64)
    stamp = np.full(arc_total, -1, np.int64)
    out = np.empty(n, np.int64)
    work = 0
    for ri in range(roots.shape[0]):
        root = roots[ri]
        ns, nt = partial_spt_kernel(root, ptr, adj_arc, adj_other, w, slot, mem_ptr, mem,
                                    rslot, rmem_ptr, rmem, guard_radius, dist, state, pnode, parc, active, first, heap, pos, touched, order)
        work += ns
        k = lift_kernel(root, ns, order, dist, pnode, parc, fwd_radius[root], leaf_radius,
                        mode, haschild, delta, stamp, out)
        for i in range(k):
            lifted[out[i]] = 1
        reset_workspace(nt, touched, dist, state, pos, active)
    return work
