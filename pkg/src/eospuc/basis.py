"""Candidate basis: the instantiated constraint language, shrinking over a run."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .model import Assignment, Cap, Constraint, Instance, Sep, satisfies_cap


@dataclass(frozen=True)
class LanguageConfig:
    sep_delta_min: int = 2
    sep_delta_max: int = 10
    cap_center_k: int = 1
    cap_center_w: int = 1
    cap_radius: int = 2
    # explicit (k, w) list overrides the neighbourhood around the centre
    cap_candidates: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self) -> None:
        if self.sep_delta_min < 1:
            raise ValueError("sep_delta_min must be >= 1")
        if self.sep_delta_max < self.sep_delta_min:
            raise ValueError("sep_delta_max must be >= sep_delta_min")
        if self.cap_radius < 0:
            raise ValueError("cap_radius must be >= 0")

    def deltas(self) -> tuple[int, ...]:
        return tuple(range(self.sep_delta_min, self.sep_delta_max + 1))

    def caps(self, horizon: int) -> list[tuple[int, int]]:
        if self.cap_candidates is not None:
            return sorted(set(self.cap_candidates))
        r = self.cap_radius
        return [
            (k, w)
            for k in range(max(0, self.cap_center_k - r), self.cap_center_k + r + 1)
            for w in range(max(1, self.cap_center_w - r), self.cap_center_w + r + 1)
            if w <= horizon
        ]

    def to_json(self) -> dict:
        d = {
            "sep_delta_min": self.sep_delta_min,
            "sep_delta_max": self.sep_delta_max,
            "cap_center_k": self.cap_center_k,
            "cap_center_w": self.cap_center_w,
            "cap_radius": self.cap_radius,
        }
        if self.cap_candidates is not None:
            d["cap_candidates"] = [list(c) for c in self.cap_candidates]
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> LanguageConfig:
        caps = d.get("cap_candidates")
        return cls(
            sep_delta_min=int(d.get("sep_delta_min", 2)),
            sep_delta_max=int(d.get("sep_delta_max", 10)),
            cap_center_k=int(d.get("cap_center_k", 1)),
            cap_center_w=int(d.get("cap_center_w", 1)),
            cap_radius=int(d.get("cap_radius", 2)),
            cap_candidates=None if caps is None else tuple((int(k), int(w)) for k, w in caps),
        )


@dataclass(frozen=True)
class CandidateBasis:
    """``sep`` maps canonical pairs to strictly increasing delta tuples.

    Pairs whose candidate list empties are dropped from the map. Every
    operation returns a new basis that is a subset of its input.
    """

    sep: Mapping[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    cap: frozenset = frozenset()

    def __post_init__(self) -> None:
        cleaned = {p: tuple(ds) for p, ds in self.sep.items() if ds}
        object.__setattr__(self, "sep", MappingProxyType(cleaned))
        object.__setattr__(self, "cap", frozenset(self.cap))

    def deltas(self, i: int, j: int) -> tuple[int, ...]:
        return self.sep.get((min(i, j), max(i, j)), ())

    def __len__(self) -> int:
        return sum(len(ds) for ds in self.sep.values()) + len(self.cap)

    def __iter__(self) -> Iterator[Constraint]:
        for (i, j), ds in sorted(self.sep.items()):
            for d in ds:
                yield Sep(i, j, d)
        for k, w in sorted(self.cap):
            yield Cap(k, w)

    def is_empty(self) -> bool:
        return not self.sep and not self.cap

    def to_json(self) -> dict:
        return {
            "sep": [
                {"i": i, "j": j, "deltas": list(ds)} for (i, j), ds in sorted(self.sep.items())
            ],
            "cap": [[k, w] for k, w in sorted(self.cap)],
        }

    @classmethod
    def from_json(cls, d: Mapping) -> CandidateBasis:
        return cls(
            {(int(r["i"]), int(r["j"])): tuple(sorted(set(r["deltas"]))) for r in d["sep"]},
            frozenset((int(k), int(w)) for k, w in d["cap"]),
        )


def instantiate_language(lang: LanguageConfig, inst: Instance) -> CandidateBasis:
    """Every constraint the language can express on this instance, unfiltered."""
    deltas = lang.deltas()
    sep = {(i, j): deltas for i in range(1, inst.n + 1) for j in range(i + 1, inst.n + 1)}
    return CandidateBasis(sep, frozenset(lang.caps(inst.horizon)))


def instantiate(lang: LanguageConfig, inst: Instance, seed_schedule: Assignment) -> CandidateBasis:
    """Language instances that the oracle-confirmed seed schedule satisfies."""
    return retain_consistent(instantiate_language(lang, inst), seed_schedule)


def min_gap(inst: Instance, i: int, j: int) -> int:
    a, b = inst.task(i), inst.task(j)
    return max(0, b.lo - a.hi, a.lo - b.hi)


def max_gap(inst: Instance, i: int, j: int) -> int:
    a, b = inst.task(i), inst.task(j)
    return max(abs(b.hi - a.lo), abs(a.hi - b.lo))


def prune_vacuous(b: CandidateBasis, inst: Instance) -> CandidateBasis:
    """Drop separations the windows alone already guarantee."""
    sep = {}
    for (i, j), ds in b.sep.items():
        g = min_gap(inst, i, j)
        sep[(i, j)] = tuple(d for d in ds if d > g)
    return CandidateBasis(sep, b.cap)


def retain_consistent(b: CandidateBasis, e: Assignment) -> CandidateBasis:
    """Keep only candidates that the accepted assignment ``e`` satisfies."""
    sep = {}
    for (i, j), ds in b.sep.items():
        si, sj = e[i], e[j]
        if si and sj:
            gap = abs(si - sj)
            ds = tuple(d for d in ds if d <= gap)
        sep[(i, j)] = ds
    cap = frozenset(c for c in b.cap if satisfies_cap(Cap(*c), e))
    return CandidateBasis(sep, cap)


def remove_sep_upto(b: CandidateBasis, i: int, j: int, delta_star: int) -> CandidateBasis:
    key = (min(i, j), max(i, j))
    if key not in b.sep:
        return b
    sep = dict(b.sep)
    sep[key] = tuple(d for d in sep[key] if d > delta_star)
    return CandidateBasis(sep, b.cap)


def remove_cap_dominated(b: CandidateBasis, k_prime: int, w_prime: int) -> CandidateBasis:
    """Remove every ``cap(k'', w'')`` with ``k'' >= k'`` and ``w'' <= w'``."""
    cap = frozenset((k, w) for k, w in b.cap if not (k >= k_prime and w <= w_prime))
    return CandidateBasis(b.sep, cap)


def is_empty(b: CandidateBasis) -> bool:
    return b.is_empty()


def from_candidates(candidates: Iterable[Constraint]) -> CandidateBasis:
    sep: dict[tuple[int, int], set[int]] = {}
    cap = set()
    for c in candidates:
        if isinstance(c, Sep):
            sep.setdefault(c.pair, set()).add(c.delta)
        else:
            cap.add((c.k, c.w))
    return CandidateBasis({p: tuple(sorted(ds)) for p, ds in sep.items()}, frozenset(cap))


def language_size(lang: LanguageConfig, n: int, horizon: int) -> int:
    pairs = n * (n - 1) // 2
    return pairs * len(lang.deltas()) + len(lang.caps(horizon))


def basis_subset(a: CandidateBasis, b: CandidateBasis) -> bool:
    """True when every candidate of ``a`` is in ``b``."""
    for p, ds in a.sep.items():
        if not set(ds) <= set(b.sep.get(p, ())):
            return False
    return a.cap <= b.cap

