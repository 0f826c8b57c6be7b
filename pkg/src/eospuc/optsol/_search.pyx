# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled branch-and-bound kernel; same node order as ``_search_py``."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport calloc, free
from posix.time cimport clock_gettime, timespec, CLOCK_MONOTONIC

MAX_WIDTH = 63

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_clzll(unsigned long long) nogil


cdef struct Ctx:
    int n
    int ncap
    int *lo
    int *hi
    double *weight
    int *sep_ptr
    int *sep_to
    int *sep_delta
    int *cap_k
    int *cap_w
    int *occ
    int *touch
    int maxslot
    int *cur
    int *best
    uint64_t *doms       # (n + 1) rows of n masks
    double best_value
    long long nodes
    long long node_limit
    double deadline
    bint stopped


cdef inline double _now() nogil:
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + ts.tv_nsec * 1e-9


cdef inline uint64_t _range_mask(int x, int y, int lo) nogil:
    cdef int width = y - x + 1
    cdef uint64_t m
    if width >= 64:
        m = <uint64_t>0xFFFFFFFFFFFFFFFF
    else:
        m = ((<uint64_t>1) << width) - 1
    return m << (x - lo)


cdef void _block(Ctx *c, uint64_t *row, int p, int a, int b) nogil:
    cdef int q, x, y
    for q in range(p + 1, c.n):
        if row[q]:
            x = a if a > c.lo[q] else c.lo[q]
            y = b if b < c.hi[q] else c.hi[q]
            if x <= y:
                row[q] &= ~_range_mask(x, y, c.lo[q])


cdef int _cap_room(Ctx *c, uint64_t *row, int p, int k, int w) nogil:
    # cut the horizon into blocks of w slots (every offset); no block can take
    # more tasks than its unused capacity or the open tasks touching it
    cdef int q, blk, first, last, spare, t, off, nb, room, best = c.n
    cdef uint64_t d
    for off in range(w):
        nb = (c.maxslot + off + w - 1) // w + 1
        for blk in range(nb):
            c.touch[blk] = 0
        for q in range(p, c.n):
            d = row[q]
            if d:
                first = c.lo[q] + __builtin_ctzll(d)
                last = c.lo[q] + 63 - __builtin_clzll(d)
                for blk in range((first - 1 + off) // w, (last - 1 + off) // w + 1):
                    c.touch[blk] += 1
        room = 0
        for blk in range(nb):
            if c.touch[blk]:
                spare = k
                for t in range(blk * w + 1 - off, blk * w + w + 1 - off):
                    if t >= 1:
                        spare -= c.occ[t]
                if spare > 0:
                    room += spare if spare < c.touch[blk] else c.touch[blk]
        if room < best:
            best = room
    return best


cdef void _dfs(Ctx *c, int p, double value) nogil:
    cdef int n = c.n
    cdef uint64_t *row = c.doms + p * n
    cdef uint64_t *child = c.doms + (p + 1) * n
    cdef uint64_t d
    cdef double bound
    cdef int q, b, s, e, x, y, ci, k, w, a, cnt, t, room

    if c.stopped:
        return
    c.nodes += 1
    if (c.nodes & 1023) == 0 and _now() > c.deadline:
        c.stopped = True
        return
    if c.node_limit and c.nodes > c.node_limit:
        c.stopped = True
        return
    if value > c.best_value:
        c.best_value = value
        for q in range(n):
            c.best[q] = c.cur[q]
    if p == n:
        return
    room = n
    for ci in range(c.ncap):
        t = _cap_room(c, row, p, c.cap_k[ci], c.cap_w[ci])
        if t < room:
            room = t
    bound = value
    for q in range(p, n):
        if row[q] and room > 0:
            bound += c.weight[q]
            room -= 1
    if bound <= c.best_value:
        return

    d = row[p]
    b = 0
    while (d >> b) != 0:
        if (d >> b) & 1:
            s = c.lo[p] + b
            for q in range(n):
                child[q] = row[q]
            for e in range(c.sep_ptr[p], c.sep_ptr[p + 1]):
                q = c.sep_to[e]
                if child[q]:
                    x = s - c.sep_delta[e] + 1
                    if x < c.lo[q]:
                        x = c.lo[q]
                    y = s + c.sep_delta[e] - 1
                    if y > c.hi[q]:
                        y = c.hi[q]
                    if x <= y:
                        child[q] &= ~_range_mask(x, y, c.lo[q])
            c.occ[s] += 1
            for ci in range(c.ncap):
                k = c.cap_k[ci]
                w = c.cap_w[ci]
                a = s - w + 1
                if a < 1:
                    a = 1
                cnt = 0
                for t in range(a, a + w):
                    cnt += c.occ[t]
                while a <= s:
                    if cnt >= k:
                        _block(c, child, p, a, a + w - 1)
                    cnt += c.occ[a + w] - c.occ[a]
                    a += 1
            c.cur[p] = s
            _dfs(c, p + 1, value + c.weight[p])
            c.cur[p] = 0
            c.occ[s] -= 1
            if c.stopped:
                return
        b += 1
    # the skip branch reuses this row unchanged
    for q in range(n):
        child[q] = row[q]
    _dfs(c, p + 1, value)


def search(lo, hi, weight, sep_ptr, sep_to, sep_delta, cap_k, cap_w,
           double time_limit, long long node_limit=0):
    """Return ``(slots, value, complete, nodes)``; ``slots`` is by position."""
    cdef Ctx c
    cdef int n = len(lo)
    cdef int i, top, nsep = len(sep_to)
    cdef bint zero_cap = False

    for i in range(n):
        if hi[i] - lo[i] + 1 > MAX_WIDTH:
            raise ValueError("window wider than %d slots" % MAX_WIDTH)

    c.n = n
    c.ncap = len(cap_k)
    top = (max(hi) if n else 0) + (max(cap_w) if cap_w else 0) + 2
    c.lo = <int *>calloc(n + 1, sizeof(int))
    c.hi = <int *>calloc(n + 1, sizeof(int))
    c.weight = <double *>calloc(n + 1, sizeof(double))
    c.sep_ptr = <int *>calloc(n + 2, sizeof(int))
    c.sep_to = <int *>calloc(nsep + 1, sizeof(int))
    c.sep_delta = <int *>calloc(nsep + 1, sizeof(int))
    c.cap_k = <int *>calloc(c.ncap + 1, sizeof(int))
    c.cap_w = <int *>calloc(c.ncap + 1, sizeof(int))
    c.occ = <int *>calloc(top, sizeof(int))
    c.touch = <int *>calloc(top, sizeof(int))
    c.maxslot = max(hi) if n else 0
    c.cur = <int *>calloc(n + 1, sizeof(int))
    c.best = <int *>calloc(n + 1, sizeof(int))
    c.doms = <uint64_t *>calloc((n + 1) * n + 1, sizeof(uint64_t))
    try:
        if (not c.lo or not c.hi or not c.weight or not c.sep_ptr or not c.sep_to
                or not c.sep_delta or not c.cap_k or not c.cap_w or not c.occ or not c.touch
                or not c.cur or not c.best or not c.doms):
            raise MemoryError()
        for i in range(n):
            c.lo[i] = lo[i]
            c.hi[i] = hi[i]
            c.weight[i] = weight[i]
        for i in range(n + 1):
            c.sep_ptr[i] = sep_ptr[i]
        for i in range(nsep):
            c.sep_to[i] = sep_to[i]
            c.sep_delta[i] = sep_delta[i]
        for i in range(c.ncap):
            c.cap_k[i] = cap_k[i]
            c.cap_w[i] = cap_w[i]
            if cap_k[i] == 0:
                zero_cap = True
        for i in range(n):
            c.doms[i] = 0 if zero_cap else _range_mask(c.lo[i], c.hi[i], c.lo[i])
        c.best_value = 0.0
        c.nodes = 0
        c.node_limit = node_limit
        c.stopped = False
        c.deadline = _now() + time_limit
        with nogil:
            _dfs(&c, 0, 0.0)
        return [c.best[i] for i in range(n)], c.best_value, not c.stopped, c.nodes
    finally:
        free(c.lo); free(c.hi); free(c.weight); free(c.sep_ptr); free(c.sep_to)
        free(c.sep_delta); free(c.cap_k); free(c.cap_w); free(c.occ); free(c.touch); free(c.cur)
        free(c.best); free(c.doms)
