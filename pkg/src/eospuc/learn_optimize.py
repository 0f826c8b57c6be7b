"""Learn&Optimize: alternate optimisation under the learned model with oracle queries."""

from __future__ import annotations

import enum
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

from .basis import (
    CandidateBasis,
    LanguageConfig,
    instantiate,
    prune_vacuous,
    retain_consistent,
)
from .cca import AcquisitionOutcome, AcquisitionStuck, acquire
from .model import Assignment, Constraint, Instance, constraint_to_json, objective_value, sorted_constraints
from .oracle import HiddenOracle, QueryKind
from .optsol import DEFAULT_TIME_LIMIT, solve


class StopReason(enum.Enum):
    ACCEPTED_OPT = "accepted_opt"
    BASIS_EXHAUSTED = "basis_exhausted"
    MODEL_CONVERGED = "model_converged"
    QUERY_CUTOFF = "query_cutoff"
    ACQUISITION_STUCK = "acquisition_stuck"


class InstanceInvalidError(RuntimeError):
    """The oracle rejected a schedule holding a single task."""


@dataclass
class IterationRecord:
    q: int
    proposal: Assignment
    v_L: float
    proven_L: bool
    verdict: bool
    best_value_so_far: float
    learned: Constraint | None = None
    acquisition: AcquisitionOutcome | None = None
    v_LuB: float | None = None
    proven_LuB: bool | None = None

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "proposal": list(self.proposal.slots),
            "v_L": self.v_L,
            "proven_L": self.proven_L,
            "verdict": self.verdict,
            "learned": None if self.learned is None else constraint_to_json(self.learned),
            "acquisition": None if self.acquisition is None else self.acquisition.to_json(),
            "v_LuB": self.v_LuB,
            "proven_LuB": self.proven_LuB,
            "best_value_so_far": self.best_value_so_far,
        }


@dataclass
class RunTrace:
    seed_schedule: Assignment
    iterations: list[IterationRecord] = field(default_factory=list)
    stop_reason: StopReason | None = None
    learned_final: frozenset = frozenset()
    basis_final: CandidateBasis | None = None
    best: Assignment | None = None
    best_value: float = 0.0
    q_star: int = 0
    main_queries: int = 0          # loop iterations only
    seed_queries: int = 0
    final_queries: int = 0
    partial_queries: int = 0
    final_value: float | None = None
    final_adopted: bool = False
    wall_time: float = 0.0

    @property
    def main_queries_total(self) -> int:
        return self.main_queries + self.seed_queries + self.final_queries

    def summary(self) -> dict:
        return {
            "stop_reason": self.stop_reason.value,
            "best_value": self.best_value,
            "best": list(self.best.slots),
            "q_star": self.q_star,
            "main": self.main_queries,
            "main_total": self.main_queries_total,
            "partial": self.partial_queries,
            "learned": [constraint_to_json(c) for c in sorted_constraints(self.learned_final)],
            "wall_time": self.wall_time,
        }

    def write(self, jsonl_path: str | Path, summary_path: str | Path | None = None) -> None:
        jsonl_path = Path(jsonl_path)
        jsonl_path.parent.mkdir(parents=True, exist_ok=True)
        with jsonl_path.open("w") as fh:
            for rec in self.iterations:
                fh.write(json.dumps(rec.to_json()) + "\n")
        if summary_path is not None:
            Path(summary_path).write_text(json.dumps(self.summary(), indent=2) + "\n")

    def plot_rows(self) -> list[tuple[int, float, float, int]]:
        """``(iteration, v_L, best_so_far, rejected)`` rows for convergence plots."""
        return [
            (r.q, r.v_L, r.best_value_so_far, 0 if r.verdict else 1) for r in self.iterations
        ]


def init_seed_schedule(inst: Instance, oracle: HiddenOracle) -> Assignment:
    """Heaviest task (lowest id on ties) alone, at its earliest slot; oracle-confirmed."""
    if inst.n < 1:
        raise ValueError("instance has no tasks")
    top = min(inst.tasks, key=lambda t: (-t.weight, t.id))
    e = inst.assignment({top.id: top.lo})
    if not oracle.ask(e, QueryKind.MAIN):
        raise InstanceInvalidError(f"oracle rejects task {top.id} scheduled alone")
    return e


def run(
    inst: Instance,
    oracle: HiddenOracle,
    lang: LanguageConfig,
    Q: int = 100,
    t_iter: float = DEFAULT_TIME_LIMIT,
    t_final: float = DEFAULT_TIME_LIMIT,
    seed: int = 0,
    *,
    gate: bool = False,
) -> tuple[Assignment, RunTrace]:
    """Propose the optimum under the learned model until the oracle accepts one.

    Each rejection teaches one constraint. The loop also stops when the basis
    empties, when the learned and fully tightened models agree on the optimal
    value, when acquisition finds nothing to learn, or after ``Q`` proposals.
    A last solve under the learned model is tried once if it beats the best.
    """
    if Q < 1:
        raise ValueError("Q must be >= 1")
    start = time.perf_counter()
    partial_before = oracle.stats().partial

    e_p = init_seed_schedule(inst, oracle)
    B = prune_vacuous(instantiate(lang, inst, e_p), inst)
    L: frozenset = frozenset()
    best, best_value = e_p, objective_value(inst, e_p)
    trace = RunTrace(seed_schedule=e_p, seed_queries=1)

    stop = StopReason.QUERY_CUTOFF
    for q in range(1, Q + 1):
        res = solve(inst, L, t_iter, seed)
        e, v_L = res.assignment, res.value
        verdict = oracle.ask(e, QueryKind.MAIN)
        trace.main_queries += 1
        rec = IterationRecord(q, e, v_L, res.proven_optimal, verdict, best_value)
        trace.iterations.append(rec)
        if verdict:
            if v_L >= best_value:
                if v_L > best_value:
                    trace.q_star = q
                best, best_value = e, v_L
            rec.best_value_so_far = best_value
            B = retain_consistent(B, e)
            stop = StopReason.ACCEPTED_OPT
            break
        try:
            outcome, L, B = acquire(e, L, B, inst, oracle, gate=gate)
        except AcquisitionStuck:
            stop = StopReason.ACQUISITION_STUCK
            break
        rec.learned, rec.acquisition = outcome.learned, outcome
        if B.is_empty():
            stop = StopReason.BASIS_EXHAUSTED
            break
        tight = solve(inst, L | frozenset(B), t_iter, seed)
        rec.v_LuB, rec.proven_LuB = tight.value, tight.proven_optimal
        if res.proven_optimal and tight.proven_optimal and math.isclose(v_L, tight.value):
            stop = StopReason.MODEL_CONVERGED
            break

    final = solve(inst, L, t_final, seed)
    trace.final_value = final.value
    if final.value > best_value:
        trace.final_queries = 1
        if oracle.ask(final.assignment, QueryKind.MAIN):
            best, best_value = final.assignment, final.value
            trace.final_adopted = True
            trace.q_star = trace.main_queries + 1

    trace.stop_reason = stop
    trace.learned_final = L
    trace.basis_final = B
    trace.best, trace.best_value = best, best_value
    trace.partial_queries = oracle.stats().partial - partial_before
    trace.wall_time = time.perf_counter() - start
    return best, trace
