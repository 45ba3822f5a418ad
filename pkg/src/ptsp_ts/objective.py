"""Weighted objective: priority minus skill penalty plus the three secondary terms."""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from functools import cached_property

from .feasibility import Schedule, can_insert, apply_insertion, validate


class InfeasibleScheduleError(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x)) if isinstance(x, float) else Fraction(x)


@dataclass(frozen=True)
class ObjectiveWeights:
    w_priority: Fraction = Fraction(1)
    w_penalty: Fraction = Fraction(1)
    w_groups: Fraction = Fraction(0)
    w_consec: Fraction = Fraction(0)
    w_workload: Fraction = Fraction(0)

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, _frac(getattr(self, f.name)))

    @classmethod
    def parse(cls, text: str) -> ObjectiveWeights:
        """Parse ``"w1,w2,wg,wc,ww"`` or a named setting."""
        if text in SETTINGS:
            return SETTINGS[text]
        parts = [p.strip() for p in text.strip("{} ").split(",")]
        if len(parts) != 5:
            raise ValueError(f"expected five comma-separated weights, got {text!r}")
        return cls(*(Fraction(p) for p in parts))

    def as_tuple(self) -> tuple[Fraction, ...]:
        return (self.w_priority, self.w_penalty, self.w_groups, self.w_consec, self.w_workload)

    def __str__(self) -> str:
        return ",".join(str(w) for w in self.as_tuple())

    @cached_property
    def integral(self) -> bool:
        """True when the total can be computed in integers (fast path)."""
        return (self.w_groups == 0 and self.w_workload == 0
                and all(w.denominator == 1 for w in self.as_tuple()))

    @cached_property
    def int_main(self) -> tuple[int, int, int]:
        """(w1, w2, wc) as ints; only meaningful when ``integral``."""
        return (self.w_priority.numerator, self.w_penalty.numerator, self.w_consec.numerator)

    def contribution(self, priority: int, deviation: int) -> Fraction:
        """Stand-alone value of one assignment under the two main terms."""
        return self.w_priority * priority - self.w_penalty * deviation


SETTINGS: dict[str, ObjectiveWeights] = {
    "Control": ObjectiveWeights(1, 1, 0, 0, 0),
    "Priority": ObjectiveWeights(1, 0, 0, 0, 0),
    "Penalty": ObjectiveWeights(1, 100, 0, 0, 0),
    "TaskGroups": ObjectiveWeights(1, 1, -10, 0, 0),
    "Workload": ObjectiveWeights(1, 1, 0, 0, 10000),
    "AllObjectives": ObjectiveWeights(1, 1, -1, 1, 1000),
}
CONTROL = SETTINGS["Control"]


@dataclass(frozen=True)
class ObjectiveBreakdown:
    priority_sum: int
    penalty_sum: int
    groups_avg: Fraction
    consec_same: int
    workload_ratio: Fraction
    weighted_total: Fraction
    # diagnostics, not objective terms
    assigned: int = 0
    enabled_shifts: int = 0
    max_groups: int = 0
    consec_any: int = 0
    consec_scheduled: int = 0
    consec_available: int = 0

    def row(self) -> dict[str, float | int]:
        """Values under the report's column labels (penalty shown negated)."""
        return {
            "Priority": self.priority_sum,
            "Penalty": -self.penalty_sum,
            "Groups": float(self.groups_avg),
            "MaxGroups": self.max_groups,
            "Consec": self.consec_same,
            "ConsecAny": self.consec_any,
            "ConsecScheduled": self.consec_scheduled,
            "ConsecAvailable": self.consec_available,
            "Workload": float(self.workload_ratio),
            "Assigned": self.assigned,
            "OF": float(self.weighted_total),
        }


def _terms(schedule: Schedule) -> tuple[int, int, int, int, int, int]:
    inst = schedule.instance
    elig = inst.eligibility
    tasks = inst.task_by_id
    prio = pen = 0
    for tid, sid in schedule.assignment.items():
        prio += tasks[tid].priority
        pen += elig[tid, sid].deviation
    n = groups = busy = length = 0
    for p in schedule.plans.values():
        if p.enabled:
            n += 1
            groups += len(p.group_tasks)
            busy += p.busy
            length += p.work_end - p.work_start
    return prio, pen, n, groups, busy, length


def score(schedule: Schedule, weights: ObjectiveWeights):
    """Weighted total from the schedule's caches, without validation.

    Returns an int when the weights allow it, else a Fraction; both compare
    exactly.
    """
    w = weights
    if w.integral:
        w1, w2, wc = w.int_main
        return w1 * schedule.prio - w2 * schedule.pen + wc * schedule.consec
    prio, pen, n, groups, busy, length = _terms(schedule)
    total = w.w_priority * prio - w.w_penalty * pen + w.w_consec * schedule.consec
    if n:
        if w.w_groups:
            total += w.w_groups * Fraction(groups, n)
        if w.w_workload:
            total += w.w_workload * Fraction(busy, length)
    return total


def evaluate(schedule: Schedule, weights: ObjectiveWeights = CONTROL, check: bool = True) -> ObjectiveBreakdown:
    """Full breakdown; rejects infeasible schedules unless ``check`` is off.

    All terms are recomputed from the assignment, not the search caches.
    """
    if check:
        report = validate(schedule)
        if not report.ok:
            raise InfeasibleScheduleError(
                f"schedule infeasible: {sorted(report.tags())} ({len(report.violations)} violations)")
    inst = schedule.instance
    asg = schedule.assignment
    prio = sum(inst.task_by_id[t].priority for t in asg)
    pen = sum(inst.eligibility[t, s].deviation for t, s in asg.items())
    n = groups = worked = length = max_groups = 0
    for sid, p in schedule.plans.items():
        if not p.enabled:
            continue
        n += 1
        gs = {inst.task_by_id[t].group for t in p.tasks}
        groups += len(gs)
        max_groups = max(max_groups, len(gs))
        cover: set[int] = set()
        for t in p.tasks:
            cover.update(inst.task_by_id[t].buckets)
        worked += len(cover)
        length += p.work_end - p.work_start
    same = anyw = sched = avail = 0
    for task in inst.tasks:
        if task.predecessor is None:
            continue
        avail += 1
        a, b = asg.get(task.predecessor), asg.get(task.id)
        if a is not None and b is not None:
            anyw += 1
            same += a == b
        if a is not None or b is not None:
            sched += 1
    g_avg = Fraction(groups, n) if n else Fraction(0)
    w_ratio = Fraction(worked, length) if length else Fraction(0)
    w = weights
    total = (w.w_priority * prio - w.w_penalty * pen + w.w_groups * g_avg
             + w.w_consec * same + w.w_workload * w_ratio)
    return ObjectiveBreakdown(prio, pen, g_avg, same, w_ratio, total, len(asg), n, max_groups,
                              anyw, sched, avail)


def delta_insert(schedule: Schedule, task_id: int, shift_id: int,
                 weights: ObjectiveWeights = CONTROL) -> Fraction:
    """Exact change in weighted total from inserting the task into the shift."""
    ins = can_insert(schedule, task_id, shift_id)
    if ins is None:
        raise InfeasibleScheduleError(f"task {task_id} cannot be inserted into shift {shift_id}")
    after = schedule.copy()
    apply_insertion(after, ins)
    return Fraction(score(after, weights)) - Fraction(score(schedule, weights))
