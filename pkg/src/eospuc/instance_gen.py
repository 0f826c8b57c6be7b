"""Synthetic instances and hidden models.

Randomness comes from ``numpy.random.SeedSequence(seed)`` split into four
independent child streams, in this fixed order: weights, windows, separated
pairs, separation deltas. New draws must go on a new child stream so that
existing instances stay bit-for-bit identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import LanguageConfig, min_gap
from .model import Cap, Instance, Sep, Task

# hidden capacity limit per task count
CAP_K_TABLE = {10: 2, 20: 2, 30: 4, 40: 5, 50: 6}

_STREAMS = ("weights", "windows", "pairs", "deltas")


def default_cap_k(n: int) -> int:
    """Tabulated limit; other sizes interpolate linearly (clamped at the ends)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n in CAP_K_TABLE:
        return CAP_K_TABLE[n]
    xs = sorted(CAP_K_TABLE)
    k = float(np.interp(n, xs, [CAP_K_TABLE[x] for x in xs]))
    return max(1, math.floor(k + 0.5))


@dataclass(frozen=True)
class GenConfig:
    n: int
    seed: int = 0
    horizon_factor: int = 3
    weight_lo: float = 0.5
    weight_hi: float = 2.0
    sep_pair_fraction: float = 0.30
    sep_delta_choices: tuple[int, ...] = (2, 3, 4, 5)
    window_len_lo: int = 2
    window_len_hi: int = 6
    cap_k: int | None = None
    cap_w: int | None = None
    lang_delta_min: int = 2
    lang_delta_max: int = 10
    lang_cap_radius: int = 2

    @property
    def horizon(self) -> int:
        return self.horizon_factor * self.n

    def resolved_cap(self) -> tuple[int, int]:
        k = self.cap_k if self.cap_k is not None else default_cap_k(self.n)
        w = self.cap_w if self.cap_w is not None else max(1, self.horizon // 5)
        return k, w

    def check(self) -> None:
        if self.n < 1 or self.horizon_factor < 1:
            raise ValueError("n and horizon_factor must be >= 1")
        if not 0.0 <= self.sep_pair_fraction <= 1.0:
            raise ValueError("sep_pair_fraction must lie in [0, 1]")
        if self.weight_lo <= 0 or self.weight_hi < self.weight_lo:
            raise ValueError("need 0 < weight_lo <= weight_hi")
        if not 1 <= self.window_len_lo <= self.window_len_hi:
            raise ValueError("need 1 <= window_len_lo <= window_len_hi")
        if self.window_len_lo > self.horizon:
            raise ValueError("windows cannot be longer than the horizon")
        if not self.sep_delta_choices or min(self.sep_delta_choices) < 1:
            raise ValueError("sep_delta_choices must be non-empty and >= 1")
        k, w = self.resolved_cap()
        if k < 1 or not 1 <= w <= self.horizon:
            raise ValueError(f"hidden cap({k}, {w}) is malformed for H={self.horizon}")


def generate(cfg: GenConfig) -> tuple[Instance, frozenset, LanguageConfig]:
    cfg.check()
    n, H = cfg.n, cfg.horizon
    rngs = dict(zip(_STREAMS, (np.random.default_rng(s) for s in np.random.SeedSequence(cfg.seed).spawn(len(_STREAMS)))))

    weights = rngs["weights"].uniform(cfg.weight_lo, cfg.weight_hi, size=n)
    tasks = []
    win = rngs["windows"]
    for j in range(n):
        length = int(win.integers(cfg.window_len_lo, cfg.window_len_hi + 1))
        length = min(length, H)
        lo = int(win.integers(1, H - length + 2))
        tasks.append(Task(j + 1, float(weights[j]), lo, lo + length - 1))
    inst = Instance(H, tuple(tasks))

    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    count = math.floor(cfg.sep_pair_fraction * len(pairs))
    chosen = sorted(rngs["pairs"].choice(len(pairs), size=count, replace=False).tolist())
    deltas = rngs["deltas"].choice(np.array(cfg.sep_delta_choices), size=count)
    hidden = {Sep(*pairs[idx], int(d)) for idx, d in zip(chosen, deltas)}
    k, w = cfg.resolved_cap()
    hidden.add(Cap(k, w))

    lang = LanguageConfig(
        sep_delta_min=cfg.lang_delta_min,
        sep_delta_max=cfg.lang_delta_max,
        cap_center_k=k,
        cap_center_w=w,
        cap_radius=cfg.lang_cap_radius,
    )
    return inst, frozenset(hidden), lang


def count_nonvacuous(inst: Instance, hidden: frozenset) -> int:
    """Hidden separations that the windows alone do not already enforce."""
    return sum(1 for c in hidden if isinstance(c, Sep) and c.delta > min_gap(inst, c.i, c.j))
