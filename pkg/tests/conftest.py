import pytest

from eospuc.basis import LanguageConfig
from eospuc.model import Cap, Instance, Sep, Task

A, B, C = 1, 2, 3


def small_instance() -> Instance:
    return Instance(10, (Task(A, 3, 2, 4), Task(B, 2, 3, 5), Task(C, 2, 7, 8)))


def small_hidden() -> frozenset:
    return frozenset({Sep(A, B, 3), Cap(1, 5)})


def small_language() -> LanguageConfig:
    caps = tuple((k, w) for k in (1, 2) for w in (3, 4, 5))
    return LanguageConfig(sep_delta_min=2, sep_delta_max=4, cap_candidates=caps)


def running_instance() -> Instance:
    return Instance(22, (Task(A, 10, 5, 5), Task(B, 8, 6, 6), Task(C, 4, 18, 22)))


@pytest.fixture
def inst3():
    return small_instance()


@pytest.fixture
def hidden3():
    return small_hidden()


@pytest.fixture
def lang3():
    return small_language()


@pytest.fixture
def running():
    return running_instance()


# one line per acceptance criterion, repeated at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
