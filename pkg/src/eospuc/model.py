"""Instances, assignments, and the separation/capacity constraint families.

Everything here is an immutable value. Task ids run 1..n; an assignment maps
each task to a slot in its window, or to 0 when the task is left out.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Mapping, Union


class InvalidAssignmentError(ValueError):
    """Raised when a slot lies outside ``{0} ∪ W_j`` or the shape is wrong."""


@dataclass(frozen=True)
class Task:
    id: int
    weight: float
    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.weight <= 0:
            raise ValueError(f"task {self.id}: weight must be positive")
        if self.lo < 1 or self.hi < self.lo:
            raise ValueError(f"task {self.id}: bad window [{self.lo}, {self.hi}]")

    @property
    def window(self) -> range:
        return range(self.lo, self.hi + 1)

    def allows(self, slot: int) -> bool:
        return slot == 0 or self.lo <= slot <= self.hi


@dataclass(frozen=True)
class Instance:
    horizon: int
    tasks: tuple[Task, ...]

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError("horizon must be positive")
        object.__setattr__(self, "tasks", tuple(self.tasks))
        for pos, task in enumerate(self.tasks, start=1):
            if task.id != pos:
                raise ValueError(f"task ids must be 1..n in order, got {task.id} at {pos}")
            if task.hi > self.horizon:
                raise ValueError(f"task {task.id}: window exceeds horizon {self.horizon}")

    @property
    def n(self) -> int:
        return len(self.tasks)

    def task(self, task_id: int) -> Task:
        return self.tasks[task_id - 1]

    def empty_assignment(self) -> Assignment:
        return Assignment((0,) * self.n)

    def assignment(self, slots: Mapping[int, int]) -> Assignment:
        """Build a complete assignment from a sparse ``{task_id: slot}`` map."""
        values = [0] * self.n
        for task_id, slot in slots.items():
            if not 1 <= task_id <= self.n:
                raise InvalidAssignmentError(f"unknown task id {task_id}")
            values[task_id - 1] = slot
        e = Assignment(tuple(values))
        validate(self, e)
        return e


@dataclass(frozen=True)
class Assignment:
    """Complete slot vector; ``slots[j - 1]`` is the slot of task ``j``."""

    slots: tuple[int, ...]

    def __getitem__(self, task_id: int) -> int:
        return self.slots[task_id - 1]

    def __len__(self) -> int:
        return len(self.slots)

    def scheduled(self) -> list[int]:
        return [j for j, s in enumerate(self.slots, start=1) if s > 0]

    def with_slot(self, task_id: int, slot: int) -> Assignment:
        values = list(self.slots)
        values[task_id - 1] = slot
        return Assignment(tuple(values))

    def as_dict(self) -> dict[int, int]:
        return {j: s for j, s in enumerate(self.slots, start=1)}


@dataclass(frozen=True, order=True)
class Sep:
    """``sep(i, j, delta)``: when both are scheduled, ``|x_i - x_j| >= delta``."""

    i: int
    j: int
    delta: int

    def __post_init__(self) -> None:
        if self.i == self.j:
            raise ValueError("separation needs two distinct tasks")
        if self.i > self.j:
            a, b = self.j, self.i
            object.__setattr__(self, "i", a)
            object.__setattr__(self, "j", b)
        if self.delta < 1:
            raise ValueError("separation delta must be >= 1")

    @property
    def pair(self) -> tuple[int, int]:
        return (self.i, self.j)


@dataclass(frozen=True, order=True)
class Cap:
    """``cap(k, w)``: any ``w`` consecutive slots host at most ``k`` tasks."""

    k: int
    w: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("capacity k must be >= 0")
        if self.w < 1:
            raise ValueError("capacity window w must be >= 1")


Constraint = Union[Sep, Cap]
ConstraintSet = frozenset


def validate(instance: Instance, e: Assignment) -> None:
    if len(e) != instance.n:
        raise InvalidAssignmentError(
            f"assignment has {len(e)} entries, instance has {instance.n} tasks"
        )
    for task, slot in zip(instance.tasks, e.slots):
        if not task.allows(slot):
            raise InvalidAssignmentError(
                f"task {task.id}: slot {slot} outside {{0}} ∪ [{task.lo}, {task.hi}]"
            )


def objective_value(instance: Instance, e: Assignment) -> float:
    validate(instance, e)
    return sum(t.weight for t, s in zip(instance.tasks, e.slots) if s > 0)


def satisfies_sep(c: Sep, e: Assignment) -> bool:
    a, b = e[c.i], e[c.j]
    return a == 0 or b == 0 or abs(a - b) >= c.delta


def satisfies_cap(c: Cap, e: Assignment) -> bool:
    """Check every window of ``w`` consecutive slots for more than ``k`` tasks.

    Windows never wrap. Only windows that start at a scheduled slot need
    checking: any other window holds a subset of one of those. Slots beyond
    the latest scheduled one are empty, so the horizon does not matter
    provided ``w <= H``.
    """
    used = sorted(s for s in e.slots if s > 0)
    if len(used) <= c.k:
        return True
    for a in range(len(used)):
        if bisect_right(used, used[a] + c.w - 1) - a > c.k:
            return False
    return True


def satisfies(c: Constraint, e: Assignment) -> bool:
    if isinstance(c, Sep):
        return satisfies_sep(c, e)
    return satisfies_cap(c, e)


def is_feasible(S: Iterable[Constraint], e: Assignment) -> bool:
    return all(satisfies(c, e) for c in S)


def dominates(a: Constraint, b: Constraint) -> bool:
    """True when every assignment satisfying ``a`` also satisfies ``b``."""
    if isinstance(a, Sep) and isinstance(b, Sep):
        return a.pair == b.pair and a.delta >= b.delta
    if isinstance(a, Cap) and isinstance(b, Cap):
        return a.k <= b.k and a.w >= b.w
    return False


def constraint_to_json(c: Constraint) -> dict:
    if isinstance(c, Sep):
        return {"type": "sep", "i": c.i, "j": c.j, "delta": c.delta}
    return {"type": "cap", "k": c.k, "w": c.w}


def constraint_from_json(d: Mapping) -> Constraint:
    kind = d.get("type")
    if kind == "sep":
        return Sep(int(d["i"]), int(d["j"]), int(d["delta"]))
    if kind == "cap":
        return Cap(int(d["k"]), int(d["w"]))
    raise ValueError(f"unknown constraint type {kind!r}")


def sorted_constraints(S: Iterable[Constraint]) -> list[Constraint]:
    """Canonical order: separations by (i, j, delta), then capacities by (k, w)."""
    seps = sorted(c for c in S if isinstance(c, Sep))
    caps = sorted(c for c in S if isinstance(c, Cap))
    return [*seps, *caps]


def instance_to_json(instance: Instance) -> dict:
    return {
        "horizon": instance.horizon,
        "tasks": [
            {"id": t.id, "weight": t.weight, "window": [t.lo, t.hi]}
            for t in instance.tasks
        ],
    }


def instance_from_json(d: Mapping) -> Instance:
    tasks = sorted(
        (
            Task(int(t["id"]), float(t["weight"]), int(t["window"][0]), int(t["window"][1]))
            for t in d["tasks"]
        ),
        key=lambda t: t.id,
    )
    return Instance(int(d["horizon"]), tuple(tasks))
