"""Exact anytime maximiser of total scheduled priority under a constraint set.

Depth-first branch-and-bound: tasks in descending weight (ties by id), each
branched on its remaining window slots in ascending order and then on 0.
Fixing a task prunes partner slots of learned separations and closes every
capacity window that became full. The bound is the current value plus the
weights of the heaviest undecided tasks with non-empty domains, counting
only as many of them as the remaining capacity room admits.

The search kernel is compiled when the extension is available and falls
back to a line-for-line Python port otherwise; ``BACKEND`` says which one
was picked. ``EOSPUC_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..model import Assignment, Cap, Constraint, Instance, Sep, objective_value
from . import _search_py

try:
    if os.environ.get("EOSPUC_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _search as _search_ext
except ImportError:
    _search_ext = None

BACKEND = "cython" if _search_ext is not None else "python"

DEFAULT_TIME_LIMIT = 20.0
BRUTE_FORCE_LIMIT = 10**7


class EnumerationLimitError(RuntimeError):
    """Brute force refused: the assignment space is larger than allowed."""


@dataclass(frozen=True)
class SolveResult:
    assignment: Assignment
    value: float
    proven_optimal: bool
    elapsed: float
    nodes_explored: int

    def to_json(self) -> dict:
        return {
            "assignment": list(self.assignment.slots),
            "value": self.value,
            "proven_optimal": self.proven_optimal,
            "elapsed": self.elapsed,
            "nodes_explored": self.nodes_explored,
        }


def _compile(inst: Instance, S: Iterable[Constraint]):
    order = sorted(range(inst.n), key=lambda t: (-inst.tasks[t].weight, t))
    pos = {t + 1: p for p, t in enumerate(order)}
    strongest: dict[tuple[int, int], int] = {}
    caps = set()
    for c in S:
        if isinstance(c, Sep):
            if c.j > inst.n:
                raise ValueError(f"{c} refers to an unknown task")
            if c.delta > strongest.get(c.pair, 0):
                strongest[c.pair] = c.delta
        elif isinstance(c, Cap):
            caps.add((c.k, c.w))
        else:
            raise TypeError(f"not a constraint: {c!r}")
    # a dominated capacity adds nothing once its dominator is enforced
    kept = sorted(
        (k, w) for k, w in caps
        if not any((k2, w2) != (k, w) and k2 <= k and w2 >= w for k2, w2 in caps)
    )
    adj: list[list[tuple[int, int]]] = [[] for _ in range(inst.n)]
    for (i, j), d in strongest.items():
        p, q = sorted((pos[i], pos[j]))
        adj[p].append((q, d))
    sep_ptr, sep_to, sep_delta = [0], [], []
    for p in range(inst.n):
        for q, d in sorted(adj[p]):
            sep_to.append(q)
            sep_delta.append(d)
        sep_ptr.append(len(sep_to))
    tasks = [inst.tasks[t] for t in order]
    return (
        order,
        dict(
            lo=[t.lo for t in tasks],
            hi=[t.hi for t in tasks],
            weight=[t.weight for t in tasks],
            sep_ptr=sep_ptr,
            sep_to=sep_to,
            sep_delta=sep_delta,
            cap_k=[k for k, _ in kept],
            cap_w=[w for _, w in kept],
        ),
    )


def solve(
    inst: Instance,
    S: Iterable[Constraint],
    time_limit: float = DEFAULT_TIME_LIMIT,
    seed: int = 0,
    *,
    backend: str | None = None,
    node_limit: int = 0,
) -> SolveResult:
    """Maximise total priority subject to ``S``.

    The search is deterministic; ``seed`` is accepted so callers can pass a
    run seed through unchanged. On timeout the best assignment found so far
    is returned with ``proven_optimal=False``; it is always feasible for S.
    """
    if time_limit <= 0:
        raise ValueError("time_limit must be positive")
    start = time.perf_counter()
    order, args = _compile(inst, S)
    kernel = _pick_kernel(backend, args)
    slots, _, complete, nodes = kernel.search(
        **args, time_limit=float(time_limit), node_limit=int(node_limit)
    )
    values = [0] * inst.n
    for p, t in enumerate(order):
        values[t] = slots[p]
    e = Assignment(tuple(values))
    return SolveResult(
        assignment=e,
        value=objective_value(inst, e),
        proven_optimal=bool(complete),
        elapsed=time.perf_counter() - start,
        nodes_explored=int(nodes),
    )


def _pick_kernel(backend: str | None, args: dict):
    if backend == "python":
        return _search_py
    too_wide = any(h - l + 1 > 63 for l, h in zip(args["lo"], args["hi"]))
    if backend == "cython":
        if _search_ext is None:
            raise RuntimeError("compiled kernel is not available")
        if too_wide:
            raise ValueError("compiled kernel handles windows of at most 63 slots")
        return _search_ext
    if backend is not None:
        raise ValueError(f"unknown backend {backend!r}")
    if _search_ext is None or too_wide:
        return _search_py
    return _search_ext


def brute_force(inst: Instance, S: Iterable[Constraint], limit: int = BRUTE_FORCE_LIMIT) -> SolveResult:
    """Exhaustive enumeration of ``prod_j ({0} ∪ W_j)``, vectorised in chunks.

    Shares nothing with the branch-and-bound path, so it can serve as its
    reference. Ties go to the first maximiser in enumeration order.
    """
    start = time.perf_counter()
    domains = [np.array([0, *t.window], dtype=np.int32) for t in inst.tasks]
    space = 1
    for d in domains:
        space *= len(d)
    if space > limit:
        raise EnumerationLimitError(f"{space} assignments exceed the limit of {limit}")
    S = list(S)
    seps = [c for c in S if isinstance(c, Sep)]
    caps = [c for c in S if isinstance(c, Cap)]
    weights = np.array([t.weight for t in inst.tasks])
    best_value, best_row = -1.0, None

    n = inst.n
    if n == 0:
        e = Assignment(())
        return SolveResult(e, 0.0, True, time.perf_counter() - start, 1)
    # enumerate the last few tasks as a dense block, the rest one prefix at a time
    split = n
    block = 1
    while split > 0 and block * len(domains[split - 1]) <= 200_000:
        split -= 1
        block *= len(domains[split])
    tail = np.array(list(itertools.product(*domains[split:])), dtype=np.int32).reshape(block, n - split)
    for prefix in itertools.product(*domains[:split]):
        X = np.empty((block, n), dtype=np.int32)
        X[:, :split] = prefix
        X[:, split:] = tail
        ok = np.ones(block, dtype=bool)
        for c in seps:
            a, b = X[:, c.i - 1], X[:, c.j - 1]
            ok &= (a == 0) | (b == 0) | (np.abs(a - b) >= c.delta)
        for c in caps:
            for t0 in range(1, max(inst.horizon - c.w + 1, 1) + 1):
                inside = ((X >= t0) & (X <= t0 + c.w - 1)).sum(axis=1)
                ok &= inside <= c.k
        if not ok.any():
            continue
        vals = np.where(ok, (X > 0) @ weights, -1.0)
        idx = int(np.argmax(vals))
        if vals[idx] > best_value:
            best_value, best_row = float(vals[idx]), X[idx].copy()
    e = Assignment(tuple(int(s) for s in best_row))
    return SolveResult(e, objective_value(inst, e), True, time.perf_counter() - start, space)


__all__ = [
    "BACKEND",
    "DEFAULT_TIME_LIMIT",
    "EnumerationLimitError",
    "SolveResult",
    "brute_force",
    "solve",
]
