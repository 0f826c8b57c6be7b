"""Conservative constraint acquisition from a single rejected schedule.

For each pair whose separation candidates the rejected schedule violates
(strongest candidate first), binary-search the pair's candidate deltas with
two-task probes and learn the largest delta whose probe is rejected. When no
pair yields one, learn the weakest capacity candidate the schedule breaks.
Exactly one constraint is learned per call.

A rejected probe cannot say which hidden constraint caused it, so a learned
separation may be stronger than the true one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .basis import CandidateBasis, remove_cap_dominated, remove_sep_upto
from .model import (
    Assignment,
    Cap,
    Constraint,
    Instance,
    Sep,
    constraint_to_json,
    satisfies_cap,
)
from .oracle import HiddenOracle, QueryKind


class AcquisitionStuck(RuntimeError):
    """No separation is justified and no capacity candidate is violated."""


class OutcomeKind(enum.Enum):
    SEP_LEARNED = "sep"
    CAP_FALLBACK = "cap"


@dataclass(frozen=True)
class Probe:
    i: int
    j: int
    slot_i: int
    slot_j: int
    verdict: bool
    delta: int | None = None  # candidate being tested; None for the gate probe

    @property
    def gap(self) -> int:
        return abs(self.slot_i - self.slot_j)

    def to_json(self) -> dict:
        return {
            "pair": [self.i, self.j],
            "slots": [self.slot_i, self.slot_j],
            "delta": self.delta,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class AcquisitionOutcome:
    learned: Constraint
    kind: OutcomeKind
    partial_queries_used: int
    probes: tuple[Probe, ...] = field(default=())
    basis_size_after: int = 0
    # (i, j, candidates searched, probes spent) per pair that was searched
    searches: tuple[tuple[int, int, int, int], ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "learned": constraint_to_json(self.learned),
            "partial_queries": self.partial_queries_used,
            "probes": [p.to_json() for p in self.probes],
            "basis_size_after": self.basis_size_after,
            "searches": [list(x) for x in self.searches],
        }


def violated_pairs(e: Assignment, b: CandidateBasis) -> list[tuple[int, int]]:
    hits = [
        (i, j)
        for (i, j), ds in b.sep.items()
        if e[i] > 0 and e[j] > 0 and abs(e[i] - e[j]) < ds[-1]
    ]
    hits.sort(key=lambda p: (-b.sep[p][-1], p))
    return hits


def pair_probe(
    i: int, j: int, s_i: int, s_j: int, oracle: HiddenOracle, log: list[Probe] | None = None,
    delta: int | None = None,
) -> bool:
    """Ask about the assignment with only ``i`` and ``j`` scheduled."""
    e = oracle.instance.assignment({i: s_i, j: s_j})
    verdict = oracle.ask(e, QueryKind.PARTIAL)
    if log is not None:
        log.append(Probe(i, j, s_i, s_j, verdict, delta))
    return verdict


def witness_slots(i: int, j: int, delta: int, inst: Instance) -> tuple[int, int] | None:
    """Window-consistent slots whose gap is the largest one below ``delta``.

    Prefers gap ``delta - 1``; ties resolved by smallest ``s_i`` then ``s_j``.
    """
    wi, wj = inst.task(i), inst.task(j)
    for gap in range(delta - 1, -1, -1):
        for s_i in wi.window:
            for s_j in sorted({s_i - gap, s_i + gap}):
                if wj.lo <= s_j <= wj.hi:
                    return s_i, s_j
    return None


def justified_gap_search(
    i: int,
    j: int,
    b: CandidateBasis,
    inst: Instance,
    oracle: HiddenOracle,
    log: list[Probe] | None = None,
) -> int | None:
    """Largest candidate delta whose witness probe the oracle rejects.

    Assumes a rejected delta implies every smaller one would be rejected too.
    Capacity interference can break that, which is accepted.
    """
    ds = b.deltas(i, j)
    lo, hi = 0, len(ds) - 1
    found = None
    while lo <= hi:
        mid = (lo + hi) // 2
        w = witness_slots(i, j, ds[mid], inst)
        if w is None:
            # every smaller candidate is unwitnessable as well
            lo = mid + 1
            continue
        if not pair_probe(i, j, w[0], w[1], oracle, log, delta=ds[mid]):
            found = ds[mid]
            lo = mid + 1
        else:
            hi = mid - 1
    return found


def capacity_fallback(e: Assignment, b: CandidateBasis) -> tuple[int, int]:
    """Weakest violated capacity: smallest width, then the largest k at it."""
    violated = [(k, w) for k, w in b.cap if not satisfies_cap(Cap(k, w), e)]
    if not violated:
        raise AcquisitionStuck("no separation justified and no capacity candidate violated")
    w_prime = min(w for _, w in violated)
    k_prime = max(k for k, w in violated if w == w_prime)
    return k_prime, w_prime


def acquire(
    e: Assignment,
    L: frozenset,
    b: CandidateBasis,
    inst: Instance,
    oracle: HiddenOracle,
    *,
    gate: bool = False,
) -> tuple[AcquisitionOutcome, frozenset, CandidateBasis]:
    """Learn one constraint from the rejected schedule ``e``.

    Returns the outcome together with the updated learned set and basis.
    With ``gate=True`` each pair is first probed at its own slots in ``e``
    and skipped when that probe is accepted; by default the binary search
    alone decides, its first rejected probe playing the gate's role.
    """
    log: list[Probe] = []
    searches = []
    for i, j in violated_pairs(e, b):
        before = len(log)
        if gate and pair_probe(i, j, e[i], e[j], oracle, log):
            searches.append((i, j, len(b.deltas(i, j)), len(log) - before))
            continue
        delta_star = justified_gap_search(i, j, b, inst, oracle, log)
        searches.append((i, j, len(b.deltas(i, j)), len(log) - before))
        if delta_star is not None:
            learned = Sep(i, j, delta_star)
            b2 = remove_sep_upto(b, i, j, delta_star)
            out = AcquisitionOutcome(
                learned, OutcomeKind.SEP_LEARNED, len(log), tuple(log), len(b2), tuple(searches)
            )
            return out, frozenset(L | {learned}), b2
    try:
        k_prime, w_prime = capacity_fallback(e, b)
    except AcquisitionStuck as exc:
        exc.probes = tuple(log)
        exc.searches = tuple(searches)
        raise
    learned = Cap(k_prime, w_prime)
    b2 = remove_cap_dominated(b, k_prime, w_prime)
    out = AcquisitionOutcome(
        learned, OutcomeKind.CAP_FALLBACK, len(log), tuple(log), len(b2), tuple(searches)
    )
    return out, frozenset(L | {learned}), b2
