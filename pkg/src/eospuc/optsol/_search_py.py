"""Pure-Python branch-and-bound kernel.

Mirrors ``_search.pyx`` step for step, so both backends visit the same nodes
and return the same incumbent. Tasks are addressed by their position in the
branching order; domains are bitmasks relative to each window's first slot.
"""

from __future__ import annotations

import time


class _Timeout(Exception):
    pass


def search(lo, hi, weight, sep_ptr, sep_to, sep_delta, cap_k, cap_w, time_limit, node_limit=0):
    """Return ``(slots, value, complete, nodes)``; ``slots`` is by position."""
    n = len(lo)
    top = (max(hi) if n else 0) + (max(cap_w) if cap_w else 0) + 2
    occ = [0] * top
    maxslot = max(hi) if n else 0
    cur = [0] * n
    best = [0] * n
    state = {"best": 0.0, "nodes": 0}
    deadline = time.perf_counter() + time_limit

    doms = [(1 << (hi[p] - lo[p] + 1)) - 1 for p in range(n)]
    if any(k == 0 for k in cap_k):
        doms = [0] * n

    def block(doms, p, a, b):
        # remove slots [a, b] from every task after position p
        for q in range(p + 1, n):
            if doms[q]:
                x, y = max(a, lo[q]), min(b, hi[q])
                if x <= y:
                    doms[q] &= ~(((1 << (y - x + 1)) - 1) << (x - lo[q]))

    def cap_room(p, doms, k, w):
        # cut the horizon into blocks of w slots (every offset); no block can
        # take more tasks than its unused capacity or the open tasks touching it
        best_room = n
        for off in range(w):
            nb = (maxslot + off + w - 1) // w + 1
            touch = [0] * nb
            for q in range(p, n):
                d = doms[q]
                if d:
                    first = lo[q] + (d & -d).bit_length() - 1
                    last = lo[q] + d.bit_length() - 1
                    for blk in range((first - 1 + off) // w, (last - 1 + off) // w + 1):
                        touch[blk] += 1
            room = 0
            for blk in range(nb):
                if touch[blk]:
                    a = max(1, blk * w + 1 - off)
                    spare = k - sum(occ[a:blk * w + w + 1 - off])
                    if spare > 0:
                        room += min(spare, touch[blk])
            best_room = min(best_room, room)
        return best_room

    def dfs(p, doms, value):
        state["nodes"] += 1
        nodes = state["nodes"]
        if (nodes & 1023) == 0 and time.perf_counter() > deadline:
            raise _Timeout
        if node_limit and nodes > node_limit:
            raise _Timeout
        if value > state["best"]:
            state["best"] = value
            best[:] = cur
        if p == n:
            return
        room = n
        for c in range(len(cap_k)):
            room = min(room, cap_room(p, doms, cap_k[c], cap_w[c]))
        bound = value
        for q in range(p, n):
            if doms[q] and room > 0:
                bound += weight[q]
                room -= 1
        if bound <= state["best"]:
            return
        d = doms[p]
        b = 0
        while d >> b:
            if (d >> b) & 1:
                s = lo[p] + b
                child = list(doms)
                for e in range(sep_ptr[p], sep_ptr[p + 1]):
                    q = sep_to[e]
                    if child[q]:
                        x = max(s - sep_delta[e] + 1, lo[q])
                        y = min(s + sep_delta[e] - 1, hi[q])
                        if x <= y:
                            child[q] &= ~(((1 << (y - x + 1)) - 1) << (x - lo[q]))
                occ[s] += 1
                for c in range(len(cap_k)):
                    k, w = cap_k[c], cap_w[c]
                    a = max(1, s - w + 1)
                    cnt = sum(occ[a:a + w])
                    while a <= s:
                        if cnt >= k:
                            block(child, p, a, a + w - 1)
                        cnt += occ[a + w] - occ[a]
                        a += 1
                cur[p] = s
                dfs(p + 1, child, value + weight[p])
                cur[p] = 0
                occ[s] -= 1
            b += 1
        dfs(p + 1, doms, value)

    complete = True
    try:
        dfs(0, doms, 0.0)
    except _Timeout:
        complete = False
    return list(best), state["best"], complete, state["nodes"]
