"""Shared builders for hand-made instances."""

from fractions import Fraction

import pytest

from ptsp_ts.instance import Availability, Instance, Operator, Skill, Task, TaskGroup, generate_instance


def task(id, start, end, group=0, priority=10, skill=0, bw=1, mandatory=False, pred=None):
    return Task(id, group, start, end, priority, skill, mandatory, Fraction(bw), pred)


def avail(sid, e=0, l=48, min_len=1, max_len=None, no_break=None, bopen=0, bclose=None):
    max_len = l - e if max_len is None else max_len
    no_break = max_len if no_break is None else no_break
    bclose = max_len if bclose is None else bclose
    return Availability(sid, e, l, min_len, max_len, no_break, bopen, bclose)


def operator(id, avs, skills=((0, 100, 6),), partial=1, total=0, rest=0):
    return Operator(id, tuple(Skill(*s) for s in skills), partial, total, rest, tuple(avs))


def make(tasks, operators, horizon=48, groups=3, name="toy", prep=4, k=2):
    inst = Instance(name, horizon, tuple(tasks), tuple(operators),
                    tuple(TaskGroup(g, f"g{g}") for g in range(groups)), 5, prep, k)
    inst.validate()
    return inst


def one_shift(tasks, **av):
    """Instance with one operator holding one availability and every skill."""
    skills = tuple((g, 100, 6) for g in range(3))
    return make(tasks, [operator(0, [avail(0, **av)], skills=skills)])


@pytest.fixture(scope="session")
def small1():
    return generate_instance("small", 1)


@pytest.fixture(scope="session")
def medium1():
    return generate_instance("medium", 1)


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
