"""Priority Greedy and Full-Acquire-then-Optimise baselines."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .basis import LanguageConfig, instantiate, prune_vacuous, retain_consistent
from .cca import AcquisitionStuck, acquire
from .learn_optimize import init_seed_schedule
from .model import Assignment, Instance, is_feasible, objective_value
from .oracle import HiddenOracle, QueryKind
from .optsol import DEFAULT_TIME_LIMIT, solve


@dataclass
class BaselineResult:
    assignment: Assignment
    value: float
    main_queries: int
    partial_queries: int
    wall_time: float
    acquisition_queries: int = 0
    repair_queries: int = 0
    seed_queries: int = 0
    learned: frozenset = frozenset()
    stuck: bool = False
    acquisitions: tuple = ()

    def summary(self) -> dict:
        return {
            "best_value": self.value,
            "best": list(self.assignment.slots),
            "main": self.main_queries,
            "partial": self.partial_queries,
            "acquisition": self.acquisition_queries,
            "repair": self.repair_queries,
            "wall_time": self.wall_time,
        }


def _drop_cheapest(inst: Instance, e: Assignment) -> Assignment:
    victim = min(e.scheduled(), key=lambda j: (inst.task(j).weight, j))
    return e.with_slot(victim, 0)


def repair(inst: Instance, e: Assignment, oracle: HiddenOracle) -> tuple[Assignment, int]:
    """Drop the lowest-weight task until the oracle accepts; returns queries used."""
    used = 0
    while e.scheduled():
        e = _drop_cheapest(inst, e)
        used += 1
        if oracle.ask(e, QueryKind.MAIN):
            return e, used
    return e, used


def priority_greedy(inst: Instance, oracle: HiddenOracle) -> BaselineResult:
    start = time.perf_counter()
    taken: set[int] = set()
    slots = {}
    for task in sorted(inst.tasks, key=lambda t: (-t.weight, t.id)):
        free = next((s for s in task.window if s not in taken), None)
        if free is not None:
            slots[task.id] = free
            taken.add(free)
    e = inst.assignment(slots)
    queries = 1
    if not oracle.ask(e, QueryKind.MAIN):
        e, used = repair(inst, e, oracle)
        queries += used
    return BaselineResult(
        e, objective_value(inst, e), queries, 0, time.perf_counter() - start,
        repair_queries=queries - 1,
    )


def random_feasible(inst: Instance, L: frozenset, rng: random.Random) -> Assignment:
    """A random schedule satisfying ``L``: tasks in random order, random slots."""
    e = inst.empty_assignment()
    order = list(range(1, inst.n + 1))
    rng.shuffle(order)
    for j in order:
        slots = list(inst.task(j).window)
        rng.shuffle(slots)
        for s in slots:
            trial = e.with_slot(j, s)
            if is_feasible(L, trial):
                e = trial
                break
    return e


def fao(
    inst: Instance,
    oracle: HiddenOracle,
    lang: LanguageConfig,
    budget: int = 100,
    t_final: float = DEFAULT_TIME_LIMIT,
    seed: int = 0,
    *,
    t_iter: float = DEFAULT_TIME_LIMIT,
    random_proposals: bool = False,
    gate: bool = False,
) -> BaselineResult:
    """Spend the whole query budget on acquisition, then solve once and repair.

    Acquisition proposals come from the same solver as Learn&Optimize, so the
    two differ only in when they stop. ``random_proposals`` swaps in random
    schedules feasible under the learned set instead.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    start = time.perf_counter()
    partial_before = oracle.stats().partial
    rng = random.Random(seed)

    e_p = init_seed_schedule(inst, oracle)
    B = prune_vacuous(instantiate(lang, inst, e_p), inst)
    L: frozenset = frozenset()
    incumbent, inc_value = e_p, objective_value(inst, e_p)
    asked = 0
    stuck = False
    outcomes = []
    for _ in range(budget):
        if random_proposals:
            e = random_feasible(inst, L, rng)
        else:
            e = solve(inst, L, t_iter, seed).assignment
        asked += 1
        if oracle.ask(e, QueryKind.MAIN):
            v = objective_value(inst, e)
            if v > inc_value:
                incumbent, inc_value = e, v
            B = retain_consistent(B, e)
            continue
        try:
            outcome, L, B = acquire(e, L, B, inst, oracle, gate=gate)
        except AcquisitionStuck:
            stuck = True
            break
        outcomes.append(outcome)

    final = solve(inst, L, t_final, seed).assignment
    repairs = 0
    if not oracle.ask(final, QueryKind.MAIN):
        final, repairs = repair(inst, final, oracle)
    value = objective_value(inst, final)
    if inc_value > value:
        final, value = incumbent, inc_value
    return BaselineResult(
        final,
        value,
        main_queries=asked + repairs + 1,
        partial_queries=oracle.stats().partial - partial_before,
        wall_time=time.perf_counter() - start,
        acquisition_queries=asked,
        repair_queries=repairs,
        seed_queries=1,
        learned=L,
        stuck=stuck,
        acquisitions=tuple(outcomes),
    )
