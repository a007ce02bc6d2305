"""Multi-level bidirectional search kernel over a highway hierarchy.

Labels are indexed ``level * n + node`` so a node may be settled once per level.
Each label carries a packed dynamic cost (the priority key) and a packed static
gap: what is left of the current level's neighbourhood radius. An arc whose
static weight exceeds the gap pushes the label up one or more levels before the
arc is considered.
"""
import numpy as np

from ._accel import kernel
from .graph import INF
from .heap import heap_pop, heap_push


@kernel
def arc_cost(a, m, dyn, static_packed, use_static, exp_ptr, exp_arcs):
    if use_static or a < m:
        if use_static:
            return static_packed[a]
        return dyn[a]
    k = a - m
    total = 0
    for i in range(exp_ptr[k], exp_ptr[k + 1]):
        total += dyn[exp_arcs[i]]
    return total


@kernel
def _expand(is_fwd, lab, nlev, n, L, m, ptr, adj_arc, other, wstat, arc_level, arc_birth, core_level, radius,
            dyn, use_static, exp_ptr, exp_arcs, key, gap, plab, parc, state, heap, pos, size,
            best_self, best_self_lab, best_other, best_other_lab, mu_box, meet_box, reached_box):
    u = lab % n
    lv = lab // n
    cu = key[lab]
    gu = gap[lab]
    for i in range(ptr[u], ptr[u + 1]):
        a = adj_arc[i]
        v = other[a]
        ws = wstat[a]
        lvl = lv
        g = gu
        while g < INF and ws > g:
            lvl += 1
            if lvl > L:
                break
            if core_level[u] >= lvl:
                g = radius[lvl, u]
            else:
                g = INF
        if lvl > L or arc_level[a] < lvl or arc_birth[a] > lvl:
            continue
        # a search inside the level core never steps back out of it
        if core_level[u] >= lvl and core_level[v] < lvl:
            continue
        if g >= INF:
            # unbounded radius inside the core, or entering the core from a bypassed node
            if core_level[u] < lvl and core_level[v] >= lvl:
                ng = radius[lvl, v]
            else:
                ng = INF
        else:
            ng = g - ws
        nk = cu + arc_cost(a, m, dyn, wstat, use_static, exp_ptr, exp_arcs)
        vl = lvl * n + v
        if state[vl] == 2:
            continue
        if state[vl] == 0:
            state[vl] = 1
            reached_box[0] += 1
        elif nk > key[vl] or (nk == key[vl] and ng <= gap[vl]):
            continue
        key[vl] = nk
        gap[vl] = ng
        plab[vl] = lab
        parc[vl] = a
        size = heap_push(heap, pos, key, size, vl)
        if nk < best_self[v]:
            best_self[v] = nk
            best_self_lab[v] = vl
            if best_other[v] < INF and nk + best_other[v] < mu_box[0]:
                mu_box[0] = nk + best_other[v]
                if is_fwd:
                    meet_box[0] = vl
                    meet_box[1] = best_other_lab[v]
                else:
                    meet_box[0] = best_other_lab[v]
                    meet_box[1] = vl
    return size


@kernel
def hh_query_kernel(s, t, n, L, m, out_ptr, out_arc, in_ptr, in_arc, tails, heads, wstat, arc_level,
                    arc_birth, core_level, rad_f, rad_b, dyn, use_static, exp_ptr, exp_arcs, trace):
    """Returns (packed cost or INF, forward meet label, backward meet label, settled,
    reached, labels_f, labels_b, parent arrays...) via the arrays allocated here."""
    nlab = (L + 1) * n
    key_f = np.full(nlab, INF, np.int64)
    key_b = np.full(nlab, INF, np.int64)
    gap_f = np.full(nlab, INF, np.int64)
    gap_b = np.full(nlab, INF, np.int64)
    plab_f = np.full(nlab, -1, np.int64)
    plab_b = np.full(nlab, -1, np.int64)
    parc_f = np.full(nlab, -1, np.int64)
    parc_b = np.full(nlab, -1, np.int64)
    st_f = np.zeros(nlab, np.int8)
    st_b = np.zeros(nlab, np.int8)
    heap_f = np.empty(nlab, np.int64)
    heap_b = np.empty(nlab, np.int64)
    pos_f = np.full(nlab, -1, np.int64)
    pos_b = np.full(nlab, -1, np.int64)
    best_f = np.full(n, INF, np.int64)
    best_b = np.full(n, INF, np.int64)
    bestlab_f = np.full(n, -1, np.int64)
    bestlab_b = np.full(n, -1, np.int64)
    mu_box = np.full(1, INF, np.int64)
    meet_box = np.full(2, -1, np.int64)
    reached_box = np.zeros(1, np.int64)

    key_f[s] = 0
    gap_f[s] = rad_f[0, s]
    st_f[s] = 1
    key_b[t] = 0
    gap_b[t] = rad_b[0, t]
    st_b[t] = 1
    best_f[s] = 0
    bestlab_f[s] = s
    best_b[t] = 0
    bestlab_b[t] = t
    reached_box[0] = 2
    size_f = heap_push(heap_f, pos_f, key_f, 0, s)
    size_b = heap_push(heap_b, pos_b, key_b, 0, t)
    if s == t:
        mu_box[0] = 0
        meet_box[0] = s
        meet_box[1] = t
    settled = 0
    ntrace = 0
    done_f = False
    done_b = False
    while True:
        kf = key_f[heap_f[0]] if size_f > 0 else INF
        kb = key_b[heap_b[0]] if size_b > 0 else INF
        if kf >= mu_box[0]:
            done_f = True
        if kb >= mu_box[0]:
            done_b = True
        if done_f and done_b:
            break
        if not done_f and (done_b or kf <= kb):
            lab, size_f = heap_pop(heap_f, pos_f, key_f, size_f)
            st_f[lab] = 2
            settled += 1
            if ntrace < trace.shape[0]:
                trace[ntrace, 0] = lab
                trace[ntrace, 1] = plab_f[lab]
                ntrace += 1
            size_f = _expand(True, lab, L + 1, n, L, m, out_ptr, out_arc, heads, wstat, arc_level,
                             arc_birth, core_level, rad_f, dyn, use_static, exp_ptr, exp_arcs, key_f, gap_f,
                             plab_f, parc_f, st_f, heap_f, pos_f, size_f, best_f, bestlab_f,
                             best_b, bestlab_b, mu_box, meet_box, reached_box)
        else:
            lab, size_b = heap_pop(heap_b, pos_b, key_b, size_b)
            st_b[lab] = 2
            settled += 1
            if ntrace < trace.shape[0]:
                trace[ntrace, 0] = -(lab + 1)
                trace[ntrace, 1] = plab_b[lab]
                ntrace += 1
            size_b = _expand(False, lab, L + 1, n, L, m, in_ptr, in_arc, tails, wstat, arc_level,
                             arc_birth, core_level, rad_b, dyn, use_static, exp_ptr, exp_arcs, key_b, gap_b,
                             plab_b, parc_b, st_b, heap_b, pos_b, size_b, best_b, bestlab_b,
                             best_f, bestlab_f, mu_box, meet_box, reached_box)

    # collect packed-level arcs: forward part reversed, then backward part
    path = np.empty(2 * n * (L + 1) + 1, np.int64)
    npath = 0
    mf = meet_box[0]
    mb = meet_box[1]
    if mu_box[0] < INF:
        x = mf
        while parc_f[x] >= 0:
            path[npath] = parc_f[x]
            npath += 1
            x = plab_f[x]
        path[:npath] = path[:npath][::-1].copy()
        x = mb
        while parc_b[x] >= 0:
            path[npath] = parc_b[x]
            npath += 1
            x = plab_b[x]
    return mu_box[0], settled, reached_box[0], path[:npath].copy(), ntrace
