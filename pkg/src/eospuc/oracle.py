"""Binary feasibility oracle over a hidden constraint set."""

from __future__ import annotations

import enum
import threading
from dataclasses import asdict, dataclass
from typing import Iterable

from .model import Assignment, Constraint, Instance, is_feasible, validate


class QueryKind(enum.Enum):
    MAIN = "main"
    PARTIAL = "partial"


@dataclass(frozen=True)
class OracleStats:
    main: int = 0
    partial: int = 0
    yes: int = 0
    no: int = 0

    @property
    def total(self) -> int:
        return self.main + self.partial

    def to_json(self) -> dict:
        return asdict(self)


class HiddenOracle:
    """Answers yes/no for complete assignments; never says which constraint failed.

    Every call is counted. There is deliberately no caching: repeated
    queries cost the same as fresh ones.
    """

    def __init__(self, instance: Instance, truth: Iterable[Constraint]):
        self.instance = instance
        self._truth = frozenset(truth)
        self._lock = threading.Lock()
        self._main = self._partial = self._yes = self._no = 0

    def ask(self, e: Assignment, kind: QueryKind = QueryKind.MAIN) -> bool:
        validate(self.instance, e)
        verdict = is_feasible(self._truth, e)
        with self._lock:
            if kind is QueryKind.MAIN:
                self._main += 1
            else:
                self._partial += 1
            if verdict:
                self._yes += 1
            else:
                self._no += 1
        return verdict

    def stats(self) -> OracleStats:
        with self._lock:
            return OracleStats(self._main, self._partial, self._yes, self._no)

    @property
    def hidden(self) -> frozenset:
        """The hidden model; for scoring only, never for the learner."""
        return self._truth
